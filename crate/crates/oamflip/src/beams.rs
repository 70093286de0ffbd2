//! Laguerre-Gaussian mode evaluation and beam geometry.
//!
//! A mode is parameterized by its radial index p, winding number ell,
//! wavelength, and Rayleigh range; the waist and wavenumber are derived. The
//! transverse profile carries the winding phase e^{i ell phi}, the wavefront
//! curvature phase, and the Gouy phase, which depends on |ell| only.

use crate::error::Error;
use crate::specfun::factorial;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Whether the Gouy phase carries |ell| (physical) or ell (a deliberate
/// mutation used to falsify the parity argument behind the winding-flip
/// transition).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GouyConvention {
    Modulus,
    Signed,
}

/// Laguerre-Gaussian mode parameters. Lengths in bohr.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMode {
    p: u32,
    ell: i32,
    wavelength: f64,
    rayleigh_range: f64,
}

impl BeamMode {
    /// Builds a mode from wavelength and Rayleigh range; both must be positive.
    pub fn new(p: u32, ell: i32, wavelength: f64, rayleigh_range: f64) -> Result<Self, Error> {
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return Err(Error::physics("beam wavelength must be positive"));
        }
        if !(rayleigh_range > 0.0 && rayleigh_range.is_finite()) {
            return Err(Error::physics("Rayleigh range must be positive"));
        }
        Ok(BeamMode {
            p,
            ell,
            wavelength,
            rayleigh_range,
        })
    }

    /// Builds a mode from wavelength and waist, deriving the Rayleigh range
    /// z_R = pi w0^2 / lambda.
    pub fn from_waist(p: u32, ell: i32, wavelength: f64, waist: f64) -> Result<Self, Error> {
        if !(waist > 0.0 && waist.is_finite()) {
            return Err(Error::physics("beam waist must be positive"));
        }
        BeamMode::new(p, ell, wavelength, PI * waist * waist / wavelength)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ell(&self) -> i32 {
        self.ell
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn rayleigh_range(&self) -> f64 {
        self.rayleigh_range
    }

    /// Beam waist w(0) = sqrt(lambda z_R / pi).
    pub fn waist(&self) -> f64 {
        (self.wavelength * self.rayleigh_range / PI).sqrt()
    }

    /// Wavenumber k = 2 pi / lambda in bohr^-1.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// The paraxial expressions assume lambda much smaller than z_R; this is
    /// a warning-level check, not an error, so that desk-scale tests can probe
    /// small Rayleigh ranges deliberately.
    pub fn is_paraxial(&self) -> bool {
        self.wavelength < self.rayleigh_range / 10.0
    }

    /// The same mode with the winding reversed: the outgoing partner of a
    /// forward flip channel.
    pub fn flipped(&self) -> BeamMode {
        BeamMode {
            ell: -self.ell,
            ..*self
        }
    }
}

/// Beam width w(z) = w(0) sqrt(1 + z^2/z_R^2); even in z with its minimum at
/// the waist plane.
pub fn beam_width(mode: &BeamMode, z: f64) -> f64 {
    let zr = mode.rayleigh_range;
    mode.waist() * (1.0 + (z / zr) * (z / zr)).sqrt()
}

pub(crate) fn gouy_coefficient(p: u32, ell: i32, convention: GouyConvention) -> f64 {
    match convention {
        GouyConvention::Modulus => f64::from(2 * p) + f64::from(ell.unsigned_abs()) + 1.0,
        GouyConvention::Signed => f64::from(2 * p) + f64::from(ell) + 1.0,
    }
}

/// Gouy phase (2p + |ell| + 1) atan(z / z_R); odd in z and independent of the
/// sign of ell.
pub fn gouy_phase(p: u32, ell: i32, z: f64, z_r: f64) -> f64 {
    gouy_coefficient(p, ell, GouyConvention::Modulus) * (z / z_r).atan()
}

/// Real transverse amplitude of the mode: normalization, vortex core factor
/// (sqrt(2) rho / w)^|ell|, Gaussian envelope, and the Laguerre polynomial.
/// Everything in the mode except the three unimodular phase factors.
pub(crate) fn envelope(mode: &BeamMode, rho: f64, z: f64) -> f64 {
    let la = mode.ell.unsigned_abs();
    let w = beam_width(mode, z);
    let arg = 2.0 * rho * rho / (w * w);
    let norm = (2.0 * factorial(mode.p) / (PI * factorial(mode.p + la))).sqrt();
    norm / w
        * (std::f64::consts::SQRT_2 * rho / w).powi(la as i32)
        * (-rho * rho / (w * w)).exp()
        * crate::specfun::assoc_laguerre(mode.p, la, arg)
}

/// As [`envelope`] but with the overall waist powers w0^(|ell| + 1) divided
/// out, for channels where those powers underflow a double.
pub(crate) fn envelope_rescaled(mode: &BeamMode, rho: f64, z: f64) -> f64 {
    let la = mode.ell.unsigned_abs();
    let w = beam_width(mode, z);
    let w0 = mode.waist();
    let arg = 2.0 * rho * rho / (w * w);
    let norm = (2.0 * factorial(mode.p) / (PI * factorial(mode.p + la))).sqrt();
    norm * (w0 / w)
        * (std::f64::consts::SQRT_2 * rho * w0 / w).powi(la as i32)
        * (-rho * rho / (w * w)).exp()
        * crate::specfun::assoc_laguerre(mode.p, la, arg)
}

/// Wavefront curvature phase k rho^2 z / (2 (z^2 + z_R^2)).
pub(crate) fn curvature_phase(mode: &BeamMode, rho: f64, z: f64) -> f64 {
    let zr = mode.rayleigh_range;
    mode.wavenumber() * rho * rho * z / (2.0 * (z * z + zr * zr))
}

pub(crate) fn gouy_term(mode: &BeamMode, z: f64, convention: GouyConvention) -> f64 {
    gouy_coefficient(mode.p, mode.ell, convention) * (z / mode.rayleigh_range).atan()
}

/// Transverse mode profile u_{p,ell}(rho, z, phi) in bohr^-1: envelope times
/// winding, curvature, and Gouy phases.
pub fn lg_mode_cylindrical(mode: &BeamMode, rho: f64, z: f64, phi: f64) -> Complex64 {
    assert!(rho >= 0.0, "lg_mode_cylindrical: require rho >= 0");
    let phase = f64::from(mode.ell) * phi + curvature_phase(mode, rho, z)
        - gouy_term(mode, z, GouyConvention::Modulus);
    envelope(mode, rho, z) * Complex64::cis(phase)
}

/// The same profile in spherical coordinates, with rho = r |sin theta| and
/// z = r cos theta.
pub fn lg_mode_spherical(mode: &BeamMode, r: f64, theta: f64, phi: f64) -> Complex64 {
    assert!(r >= 0.0, "lg_mode_spherical: require r >= 0");
    lg_mode_cylindrical(mode, (r * theta.sin()).abs(), r * theta.cos(), phi)
}

/// Scalar vector-potential amplitude u(rho, z, phi) e^{ikz} with z = r cos
/// theta; the polarization direction is reduced to a scalar overlap in the
/// matrix-element layer.
pub fn vector_potential_amplitude(mode: &BeamMode, r: f64, theta: f64, phi: f64) -> Complex64 {
    let z = r * theta.cos();
    lg_mode_spherical(mode, r, theta, phi) * Complex64::cis(mode.wavenumber() * z)
}
