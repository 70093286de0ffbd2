//! Matrix elements for twisted-light scattering on atomic hydrogen.
//!
//! This crate evaluates the transition matrix element `<f| A_f* . A_i |e^{iq.r}| i>`
//! for plane-wave and Laguerre-Gaussian (twisted) photon modes scattering from
//! hydrogen bound states, entirely in atomic units. It covers:
//!
//! * hydrogen wavefunctions and the analytic radial/angular moments they factor
//!   into ([`specfun`]),
//! * Laguerre-Gaussian mode evaluation, beam geometry, and the Gouy phase
//!   ([`beams`]),
//! * deterministic adaptive quadrature over spherical coordinates ([`quad`]),
//! * the matrix elements themselves: plane-wave, general twisted at arbitrary
//!   scattering angle, forward-elastic winding flips, and their closed-form
//!   small-atom limits ([`melement`]),
//! * parameter sweeps, power-law fitting, and a self-validation suite
//!   ([`scan`], [`validate`]).
//!
//! The primary way in is the `examples/` directory: each example is a small
//! runnable program exercising one capability (`forward_flip`,
//! `selection_rules`, `waist_scaling`, `gaussian_limit`, `beam_modes`,
//! `angular_scan`, `gouy_falsifier`). A thin `oamflip` binary exposes the same
//! machinery as `element`, `sweep`, `fit`, and `validate` subcommands for
//! scripted use.

pub mod beams;
pub mod config;
pub mod error;
pub mod melement;
pub mod quad;
pub mod scan;
pub mod specfun;
pub mod validate;

pub use beams::{BeamMode, GouyConvention};
pub use error::Error;
pub use melement::{AmplitudeResult, Method, QConvention, ScatteringChannel};
pub use quad::{QuadResult, QuadratureSpec, RadialRule};
pub use scan::{FitResult, SweepAxis, SweepSpec};
pub use specfun::HydrogenState;
