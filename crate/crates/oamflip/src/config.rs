//! JSON configuration documents for single-channel runs and sweeps.
//!
//! One self-describing document pins every physical input, so a run can be
//! reproduced exactly from its echoed configuration. Schema violations
//! surface as config errors with a field path (CLI exit 2); values that are
//! structurally fine but physically invalid surface as physics errors
//! (CLI exit 3).

use crate::beams::BeamMode;
use crate::error::Error;
use crate::melement::{QConvention, ScatteringChannel};
use crate::quad::QuadratureSpec;
use crate::scan::SweepAxis;
use crate::specfun::HydrogenState;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    pub p: Option<u32>,
    pub ell: Option<i32>,
    pub wavelength_au: Option<f64>,
    pub rayleigh_range_au: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSection {
    pub n: Option<u32>,
    pub l: Option<u32>,
    pub m: Option<i32>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringSection {
    pub mode: Option<String>,
    pub theta_deg: Option<f64>,
    pub elastic: Option<bool>,
    pub polarization_overlap: Option<f64>,
    pub q_convention: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadSection {
    pub rel_tol: Option<f64>,
    pub max_doublings: Option<u32>,
}

/// The raw document as written by the user.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub beam: BeamSection,
    #[serde(default)]
    pub beam_out: Option<BeamSection>,
    pub atom_in: AtomSection,
    pub atom_out: AtomSection,
    pub scattering: ScatteringSection,
    #[serde(default)]
    pub quadrature: Option<QuadSection>,
}

impl ConfigDocument {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::config("document", e.to_string()))
    }
}

/// Which evaluator a document dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Plane,
    General,
    ForwardFlip,
}

impl RunMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunMode::Plane => "plane",
            RunMode::General => "general",
            RunMode::ForwardFlip => "forward_flip",
        }
    }
}

/// Fully materialized inputs, echoed verbatim into every output record.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub beam: ResolvedBeam,
    pub beam_out: ResolvedBeam,
    pub atom_in: ResolvedAtom,
    pub atom_out: ResolvedAtom,
    pub scattering: ResolvedScattering,
    pub quadrature: ResolvedQuad,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedBeam {
    pub p: u32,
    pub ell: i32,
    pub wavelength_au: f64,
    pub rayleigh_range_au: f64,
    pub waist_au: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedAtom {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedScattering {
    pub mode: &'static str,
    pub theta_deg: f64,
    pub elastic: bool,
    pub polarization_overlap: f64,
    pub q_convention: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedQuad {
    pub rel_tol: f64,
    pub max_doublings: u32,
}

/// A resolved document: the typed channel plus its serializable echo.
#[derive(Debug, Clone)]
pub struct ResolvedChannel {
    pub echo: ResolvedConfig,
    pub mode: RunMode,
    pub channel: ScatteringChannel,
    pub q_convention: QConvention,
    pub quadrature: QuadratureSpec,
}

fn require<T: Copy>(path: &str, value: Option<T>) -> Result<T, Error> {
    value.ok_or_else(|| Error::config(path, "missing required field"))
}

fn forbid<T>(path: &str, value: &Option<T>, why: &str) -> Result<(), Error> {
    if value.is_some() {
        return Err(Error::config(path, why));
    }
    Ok(())
}

struct BeamValues {
    p: u32,
    ell: i32,
    wavelength: f64,
    rayleigh_range: f64,
}

fn resolve_beam_values(
    section: &BeamSection,
    prefix: &str,
    axis: Option<(SweepAxis, f64)>,
) -> Result<BeamValues, Error> {
    let mut p = section.p;
    let mut ell = section.ell;
    let mut wavelength = section.wavelength_au;
    let mut rayleigh = section.rayleigh_range_au;

    if let Some((axis, value)) = axis {
        match axis {
            SweepAxis::Waist => {
                forbid(
                    &format!("{prefix}.rayleigh_range_au"),
                    &section.rayleigh_range_au,
                    "must be omitted when sweeping the waist (derived per grid point)",
                )?;
                let lambda = require(&format!("{prefix}.wavelength_au"), wavelength)?;
                if value.is_nan() || value <= 0.0 {
                    return Err(Error::physics("waist grid values must be positive"));
                }
                rayleigh = Some(std::f64::consts::PI * value * value / lambda);
            }
            SweepAxis::RayleighRange => {
                forbid(
                    &format!("{prefix}.rayleigh_range_au"),
                    &section.rayleigh_range_au,
                    "must be omitted when sweeping the Rayleigh range",
                )?;
                rayleigh = Some(value);
            }
            SweepAxis::Wavelength => {
                forbid(
                    &format!("{prefix}.wavelength_au"),
                    &section.wavelength_au,
                    "must be omitted when sweeping the wavelength",
                )?;
                wavelength = Some(value);
            }
            SweepAxis::Ell => {
                forbid(
                    &format!("{prefix}.ell"),
                    &section.ell,
                    "must be omitted when sweeping the winding number",
                )?;
                ell = Some(integral_value(value, "ell grid values")? as i32);
            }
            SweepAxis::RadialIndex => {
                forbid(
                    &format!("{prefix}.p"),
                    &section.p,
                    "must be omitted when sweeping the radial index",
                )?;
                let v = integral_value(value, "p grid values")?;
                if v < 0 {
                    return Err(Error::physics("p grid values must be non-negative"));
                }
                p = Some(v as u32);
            }
            SweepAxis::PrincipalN => {}
        }
    }

    Ok(BeamValues {
        p: require(&format!("{prefix}.p"), p)?,
        ell: require(&format!("{prefix}.ell"), ell)?,
        wavelength: require(&format!("{prefix}.wavelength_au"), wavelength)?,
        rayleigh_range: require(&format!("{prefix}.rayleigh_range_au"), rayleigh)?,
    })
}

fn integral_value(v: f64, what: &str) -> Result<i64, Error> {
    if v.fract() != 0.0 || !v.is_finite() || v.abs() > 1e9 {
        return Err(Error::physics(format!("{what} must be integers, got {v}")));
    }
    Ok(v as i64)
}

fn resolve_atom(
    section: &AtomSection,
    prefix: &str,
    n_override: Option<u32>,
) -> Result<HydrogenState, Error> {
    let n = match n_override {
        Some(n) => {
            forbid(
                &format!("{prefix}.n"),
                &section.n,
                "must be omitted when sweeping the principal quantum number",
            )?;
            n
        }
        None => require(&format!("{prefix}.n"), section.n)?,
    };
    let l = require(&format!("{prefix}.l"), section.l)?;
    let m = require(&format!("{prefix}.m"), section.m)?;
    HydrogenState::new(n, l, m)
}

/// Resolves a document into a typed channel, optionally overriding one axis
/// with a sweep grid value.
pub fn resolve(
    doc: &ConfigDocument,
    axis: Option<(SweepAxis, f64)>,
) -> Result<ResolvedChannel, Error> {
    let mode = match require("scattering.mode", doc.scattering.mode.as_deref())? {
        "plane" => RunMode::Plane,
        "general" => RunMode::General,
        "forward_flip" => RunMode::ForwardFlip,
        other => {
            return Err(Error::config(
                "scattering.mode",
                format!("expected one of plane | general | forward_flip, got {other:?}"),
            ))
        }
    };
    let q_convention = match doc.scattering.q_convention.as_deref() {
        None | Some("exact") => QConvention::Exact,
        Some("paper_small_angle") => QConvention::SmallAngle,
        Some(other) => {
            return Err(Error::config(
                "scattering.q_convention",
                format!("expected exact | paper_small_angle, got {other:?}"),
            ))
        }
    };
    let theta_deg = require("scattering.theta_deg", doc.scattering.theta_deg)?;
    let elastic = require("scattering.elastic", doc.scattering.elastic)?;
    let polarization = require(
        "scattering.polarization_overlap",
        doc.scattering.polarization_overlap,
    )?;

    let n_override = match axis {
        Some((SweepAxis::PrincipalN, v)) => {
            let n = integral_value(v, "N grid values")?;
            if n < 1 {
                return Err(Error::physics("N grid values must be >= 1"));
            }
            Some(n as u32)
        }
        _ => None,
    };

    let beam_values = resolve_beam_values(&doc.beam, "beam", axis)?;
    let beam_in = BeamMode::new(
        beam_values.p,
        beam_values.ell,
        beam_values.wavelength,
        beam_values.rayleigh_range,
    )?;

    // The outgoing beam defaults to the winding flip of the incoming one;
    // explicitly given fields override, missing ones inherit. A swept beam
    // axis applies to both beams, so only the swept field is blanked here.
    let beam_out = match &doc.beam_out {
        None => beam_in.flipped(),
        Some(section) => {
            let axis_out = axis.filter(|(a, _)| {
                matches!(
                    a,
                    SweepAxis::Waist | SweepAxis::RayleighRange | SweepAxis::Wavelength
                )
            });
            let sweeps_wavelength = matches!(axis_out, Some((SweepAxis::Wavelength, _)));
            let merged = BeamSection {
                p: section.p.or(Some(beam_values.p)),
                ell: section.ell.or(Some(-beam_values.ell)),
                wavelength_au: if sweeps_wavelength {
                    None
                } else {
                    section.wavelength_au.or(Some(beam_values.wavelength))
                },
                rayleigh_range_au: if axis_out.is_some() && !sweeps_wavelength {
                    None
                } else {
                    section
                        .rayleigh_range_au
                        .or(Some(beam_values.rayleigh_range))
                },
            };
            let v = resolve_beam_values(&merged, "beam_out", axis_out)?;
            BeamMode::new(v.p, v.ell, v.wavelength, v.rayleigh_range)?
        }
    };

    let atom_in = resolve_atom(&doc.atom_in, "atom_in", n_override)?;
    let atom_out = resolve_atom(&doc.atom_out, "atom_out", n_override)?;

    let quad_section = doc.quadrature.clone().unwrap_or_default();
    let rel_tol = quad_section.rel_tol.unwrap_or(1e-8);
    if !rel_tol.is_finite() || rel_tol <= 0.0 {
        return Err(Error::config("quadrature.rel_tol", "must be positive"));
    }
    let max_doublings = quad_section.max_doublings.unwrap_or(12);
    if max_doublings == 0 {
        return Err(Error::config("quadrature.max_doublings", "must be >= 1"));
    }

    let theta = theta_deg.to_radians();
    if mode == RunMode::ForwardFlip {
        if theta != 0.0 {
            return Err(Error::physics("forward_flip mode requires theta_deg = 0"));
        }
        if !elastic {
            return Err(Error::physics("forward_flip mode requires elastic = true"));
        }
        if beam_out.ell() != -beam_in.ell()
            || beam_out.p() != beam_in.p()
            || beam_out.wavelength() != beam_in.wavelength()
            || beam_out.rayleigh_range() != beam_in.rayleigh_range()
        {
            return Err(Error::physics(
                "forward_flip mode requires beam_out to be the exact winding flip of beam",
            ));
        }
    }

    let channel = ScatteringChannel::new(
        beam_in,
        beam_out,
        atom_in,
        atom_out,
        theta,
        elastic,
        polarization,
    )?;

    let mut quadrature = QuadratureSpec::for_states(atom_in.n(), atom_out.n());
    quadrature.rel_tol = rel_tol;
    quadrature.max_doublings = max_doublings;

    let echo = ResolvedConfig {
        beam: echo_beam(&beam_in),
        beam_out: echo_beam(&beam_out),
        atom_in: ResolvedAtom {
            n: atom_in.n(),
            l: atom_in.l(),
            m: atom_in.m(),
        },
        atom_out: ResolvedAtom {
            n: atom_out.n(),
            l: atom_out.l(),
            m: atom_out.m(),
        },
        scattering: ResolvedScattering {
            mode: mode.as_str(),
            theta_deg,
            elastic,
            polarization_overlap: polarization,
            q_convention: match q_convention {
                QConvention::Exact => "exact",
                QConvention::SmallAngle => "paper_small_angle",
            },
        },
        quadrature: ResolvedQuad {
            rel_tol,
            max_doublings,
        },
    };

    Ok(ResolvedChannel {
        echo,
        mode,
        channel,
        q_convention,
        quadrature,
    })
}

fn echo_beam(beam: &BeamMode) -> ResolvedBeam {
    ResolvedBeam {
        p: beam.p(),
        ell: beam.ell(),
        wavelength_au: beam.wavelength(),
        rayleigh_range_au: beam.rayleigh_range(),
        waist_au: beam.waist(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_doc() -> ConfigDocument {
        ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0, "rayleigh_range_au": 3141.5926535897932},
              "atom_in": {"n": 2, "l": 1, "m": -1},
              "atom_out": {"n": 2, "l": 1, "m": 1},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn resolves_a_flip_document_with_defaults() {
        let r = resolve(&flip_doc(), None).unwrap();
        assert_eq!(r.mode, RunMode::ForwardFlip);
        assert_eq!(r.channel.beam_out().ell(), -1);
        assert_eq!(r.echo.scattering.q_convention, "exact");
        assert_eq!(r.echo.quadrature.max_doublings, 12);
        assert!((r.echo.beam.waist_au - 100.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let err = ConfigDocument::from_json(r#"{"beam": {"pp": 1}}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_fields_name_their_path() {
        let doc = ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0},
              "atom_in": {"n": 2, "l": 1, "m": -1},
              "atom_out": {"n": 2, "l": 1, "m": 1},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap();
        let err = resolve(&doc, None).unwrap_err();
        match &err {
            Error::Config { path, .. } => assert_eq!(path, "beam.rayleigh_range_au"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn physics_violations_map_to_exit_three() {
        let mut doc = flip_doc();
        doc.atom_in.l = Some(2); // L = N
        let err = resolve(&doc, None).unwrap_err();
        assert_eq!(err.exit_code(), 3);

        let mut doc = flip_doc();
        doc.beam.ell = Some(2); // N_min = 3 > 2 surfaces later, at evaluation
        let r = resolve(&doc, None).unwrap();
        let spec = r.quadrature.clone();
        let out = crate::melement::forward_flip_element(
            r.channel.beam_in(),
            r.channel.atom_in(),
            r.channel.atom_out(),
            &spec,
        );
        assert_eq!(out.unwrap_err().exit_code(), 3);
    }

    #[test]
    fn explicit_beam_out_inherits_under_a_waist_sweep() {
        // General-mode document with a distinct outgoing mode; sweeping the
        // waist must rebuild both beams from their (inherited) wavelengths.
        let doc = ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0},
              "beam_out": {"p": 1, "ell": -1},
              "atom_in": {"n": 3, "l": 1, "m": -1},
              "atom_out": {"n": 3, "l": 2, "m": 1},
              "scattering": {"mode": "general", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap();
        let r = resolve(&doc, Some((SweepAxis::Waist, 150.0))).unwrap();
        assert_eq!(r.channel.beam_out().p(), 1);
        assert_eq!(r.channel.beam_out().ell(), -1);
        assert!((r.channel.beam_out().waist() - 150.0).abs() < 1e-9);
        assert_eq!(
            r.channel.beam_out().wavelength(),
            r.channel.beam_in().wavelength()
        );
    }

    #[test]
    fn waist_axis_overrides_derive_the_rayleigh_range() {
        let mut doc = flip_doc();
        doc.beam.rayleigh_range_au = None;
        let r = resolve(&doc, Some((SweepAxis::Waist, 200.0))).unwrap();
        let zr = std::f64::consts::PI * 200.0 * 200.0 / 10.0;
        assert!((r.channel.beam_in().rayleigh_range() - zr).abs() < 1e-9);
        // Present axis field is rejected.
        let err = resolve(&flip_doc(), Some((SweepAxis::Waist, 200.0))).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
