//! Single-channel evaluation records, parameter sweeps, and power-law fits.
//!
//! Output formats are fixed: JSON records echo every resolved input, CSV uses
//! '.' decimals, 17 significant digits, and LF line endings, and rows appear
//! in grid order no matter how the points were scheduled. Identical inputs
//! produce byte-identical output.

use crate::beams::GouyConvention;
use crate::config::{resolve, ConfigDocument, ResolvedChannel, RunMode};
use crate::error::Error;
use crate::melement::{
    closed_form_flip_element, compton_element, forward_flip_element, twisted_element,
    AmplitudeResult,
};
use rayon::prelude::*;
use serde::Serialize;
use std::str::FromStr;

/// Sweepable parameter axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Waist,
    RayleighRange,
    Wavelength,
    Ell,
    RadialIndex,
    PrincipalN,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Waist => "waist",
            SweepAxis::RayleighRange => "rayleigh_range",
            SweepAxis::Wavelength => "wavelength",
            SweepAxis::Ell => "ell",
            SweepAxis::RadialIndex => "p",
            SweepAxis::PrincipalN => "n",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "waist" => Ok(SweepAxis::Waist),
            "rayleigh_range" => Ok(SweepAxis::RayleighRange),
            "wavelength" => Ok(SweepAxis::Wavelength),
            "ell" => Ok(SweepAxis::Ell),
            "p" => Ok(SweepAxis::RadialIndex),
            "n" | "N" => Ok(SweepAxis::PrincipalN),
            other => Err(Error::config(
                "axis",
                format!(
                    "expected waist | rayleigh_range | wavelength | ell | p | n, got {other:?}"
                ),
            )),
        }
    }
}

/// A validated sweep request: the axis and a strictly monotone grid of at
/// least two values.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    axis: SweepAxis,
    grid: Vec<f64>,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, grid: Vec<f64>) -> Result<Self, Error> {
        if grid.len() < 2 {
            return Err(Error::config("grid", "need at least two grid points"));
        }
        if grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("grid", "grid values must be finite"));
        }
        let increasing = grid.windows(2).all(|w| w[0] < w[1]);
        let decreasing = grid.windows(2).all(|w| w[0] > w[1]);
        if !increasing && !decreasing {
            return Err(Error::config("grid", "grid must be strictly monotone"));
        }
        Ok(SweepSpec { axis, grid })
    }

    pub fn axis(&self) -> SweepAxis {
        self.axis
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// Least-squares power-law fit in log-log space.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    /// Fitted exponent.
    pub slope: f64,
    /// Intercept in natural-log space.
    pub intercept: f64,
    /// Largest absolute residual of ln(y) against the fitted line.
    pub max_residual: f64,
}

/// Fits y = C x^slope through (x, y) points, all of which must be positive.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult, Error> {
    if points.len() < 2 {
        return Err(Error::data("power-law fit needs at least two points"));
    }
    if points
        .iter()
        .any(|&(x, y)| x <= 0.0 || y <= 0.0 || !x.is_finite() || !y.is_finite())
    {
        return Err(Error::data(
            "power-law fit requires strictly positive, finite coordinates",
        ));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::data("power-law fit needs distinct x values"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = logs
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(FitResult {
        slope,
        intercept,
        max_residual,
    })
}

/// One evaluated channel: the resolved echo plus the amplitude.
#[derive(Debug, Clone, Serialize)]
pub struct ElementRecord {
    pub config: crate::config::ResolvedConfig,
    pub value_re: f64,
    pub value_im: f64,
    pub abs_value: f64,
    pub error_estimate: f64,
    pub method: &'static str,
    pub rescale_power: i32,
    pub converged: bool,
}

/// Evaluates one resolved channel with the given Gouy convention.
pub fn evaluate_resolved(
    resolved: &ResolvedChannel,
    gouy: GouyConvention,
) -> Result<AmplitudeResult, Error> {
    let ch = &resolved.channel;
    match resolved.mode {
        RunMode::Plane => Ok(compton_element(
            ch,
            resolved.q_convention,
            &resolved.quadrature,
        )),
        RunMode::General => Ok(twisted_element(
            ch,
            &resolved.quadrature,
            gouy,
            resolved.q_convention,
        )),
        RunMode::ForwardFlip => forward_flip_element(
            ch.beam_in(),
            ch.atom_in(),
            ch.atom_out(),
            &resolved.quadrature,
        ),
    }
}

/// Resolves and evaluates a document, producing the output record.
pub fn evaluate_element(
    doc: &ConfigDocument,
    gouy: GouyConvention,
) -> Result<ElementRecord, Error> {
    let resolved = resolve(doc, None)?;
    let result = evaluate_resolved(&resolved, gouy)?;
    Ok(record_from(resolved, result))
}

fn record_from(resolved: ResolvedChannel, result: AmplitudeResult) -> ElementRecord {
    ElementRecord {
        config: resolved.echo,
        value_re: result.value.re,
        value_im: result.value.im,
        abs_value: result.value.norm(),
        error_estimate: result.error_estimate,
        method: result.method.as_str(),
        rescale_power: result.rescale_power,
        converged: result.converged,
    }
}

impl ElementRecord {
    /// Deterministic pretty JSON rendering of the record.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serialization cannot fail")
    }
}

/// 17 significant digits, enough to round-trip a double exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

const SWEEP_HEADER: &str =
    "axis_name,axis_value,re_M,im_M,abs_M,err_est,closed_form_abs_M,rel_diff,error";

/// Runs a sweep over the given axis and grid. Points evaluate in parallel but
/// rows are emitted in grid order; per-point physics failures land in the
/// error column and the sweep continues.
pub fn run_sweep(
    doc: &ConfigDocument,
    spec: &SweepSpec,
    gouy: GouyConvention,
) -> Result<String, Error> {
    // Surface template/axis conflicts before spending any quadrature time.
    // Physics errors stay per-point (the row keeps them in its error column).
    if let Err(err @ Error::Config { .. }) = resolve(doc, Some((spec.axis, spec.grid[0]))) {
        return Err(err);
    }

    let rows: Vec<String> = spec
        .grid
        .par_iter()
        .map(|&value| sweep_row(doc, spec.axis, value, gouy))
        .collect();

    let mut out = String::with_capacity(rows.len() * 160 + SWEEP_HEADER.len() + 1);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

fn sweep_row(doc: &ConfigDocument, axis: SweepAxis, value: f64, gouy: GouyConvention) -> String {
    let axis_name = axis.as_str();
    let axis_value = fmt_f64(value);
    match sweep_point(doc, axis, value, gouy) {
        Ok((result, closed_abs)) => {
            let (cf_col, rel_col) = match closed_abs {
                Some(cf) if cf > 0.0 => {
                    let rel = (result.value.norm() - cf).abs() / cf;
                    (fmt_f64(cf), fmt_f64(rel))
                }
                Some(cf) => (fmt_f64(cf), String::new()),
                None => (String::new(), String::new()),
            };
            format!(
                "{axis_name},{axis_value},{},{},{},{},{cf_col},{rel_col},",
                fmt_f64(result.value.re),
                fmt_f64(result.value.im),
                fmt_f64(result.value.norm()),
                fmt_f64(result.error_estimate),
            )
        }
        Err(err) => {
            let msg = err.to_string().replace(',', ";").replace('\n', " ");
            format!("{axis_name},{axis_value},,,,,,,{msg}")
        }
    }
}

fn sweep_point(
    doc: &ConfigDocument,
    axis: SweepAxis,
    value: f64,
    gouy: GouyConvention,
) -> Result<(AmplitudeResult, Option<f64>), Error> {
    let resolved = resolve(doc, Some((axis, value)))?;
    let result = evaluate_resolved(&resolved, gouy)?;
    // Closed-form companion column for flip channels whose geometry matches
    // the L_i = L_f = |ell| closed form.
    let closed = if resolved.mode == RunMode::ForwardFlip {
        let beam = resolved.channel.beam_in();
        let atoms_match = resolved.channel.atom_in().l() == beam.ell().unsigned_abs()
            && resolved.channel.atom_out().l() == beam.ell().unsigned_abs();
        if atoms_match {
            closed_form_flip_element(beam, resolved.channel.atom_in().n())
                .ok()
                .map(|c| c.value.norm())
        } else {
            None
        }
    } else {
        None
    };
    Ok((result, closed))
}

/// Parses a sweep CSV (the format written by [`run_sweep`]) into (axis_value,
/// abs_M) points for fitting.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<(f64, f64)>, Error> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::data("empty CSV input"))?;
    let columns: Vec<&str> = header.split(',').collect();
    let x_idx = columns
        .iter()
        .position(|c| *c == "axis_value")
        .ok_or_else(|| Error::data("CSV is missing the axis_value column"))?;
    let y_idx = columns
        .iter()
        .position(|c| *c == "abs_M")
        .ok_or_else(|| Error::data("CSV is missing the abs_M column"))?;
    let mut points = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |idx: usize| -> Result<f64, Error> {
            fields
                .get(idx)
                .filter(|s| !s.is_empty())
                .ok_or_else(|| Error::data(format!("row {}: missing value", lineno + 2)))?
                .parse::<f64>()
                .map_err(|e| Error::data(format!("row {}: {e}", lineno + 2)))
        };
        points.push((get(x_idx)?, get(y_idx)?));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn flip_doc_without_rayleigh() -> ConfigDocument {
        ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0},
              "atom_in": {"n": 2, "l": 1, "m": -1},
              "atom_out": {"n": 2, "l": 1, "m": 1},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn fit_recovers_exact_power_data() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|k| (k as f64, (k as f64).powi(3))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert_relative_eq!(fit.slope, 3.0, max_relative = 1e-12);
        assert!(fit.max_residual < 1e-12);

        // Two points interpolate exactly.
        let fit2 = fit_power_law(&[(2.0, 5.0), (8.0, 11.0)]).unwrap();
        assert!(fit2.max_residual < 1e-12);

        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, -1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn fit_is_exact_on_synthetic_power_laws(
            c in 0.1..10.0f64,
            k in -6.0..6.0f64,
        ) {
            let pts: Vec<(f64, f64)> = [1.0, 2.0, 5.0, 10.0, 50.0]
                .iter()
                .map(|&x: &f64| (x, c * x.powf(k)))
                .collect();
            let fit = fit_power_law(&pts).unwrap();
            prop_assert!((fit.slope - k).abs() < 1e-9);
            prop_assert!((fit.intercept - c.ln()).abs() < 1e-8);
        }
    }

    #[test]
    fn sweep_spec_validation() {
        assert!(SweepSpec::new(SweepAxis::Waist, vec![]).is_err());
        assert!(SweepSpec::new(SweepAxis::Waist, vec![1.0]).is_err());
        assert!(SweepSpec::new(SweepAxis::Waist, vec![1.0, 1.0]).is_err());
        assert!(SweepSpec::new(SweepAxis::Waist, vec![1.0, 3.0, 2.0]).is_err());
        assert!(SweepSpec::new(SweepAxis::Waist, vec![3.0, 2.0, 1.0]).is_ok());
        assert_eq!("waist".parse::<SweepAxis>().unwrap(), SweepAxis::Waist);
        assert!("up".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn waist_sweep_follows_the_closed_form_power_law() {
        let doc = flip_doc_without_rayleigh();
        let spec = SweepSpec::new(SweepAxis::Waist, vec![100.0, 200.0, 400.0]).unwrap();
        let csv = run_sweep(&doc, &spec, GouyConvention::Modulus).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
        let rows: Vec<Vec<String>> = lines
            .map(|l| l.split(',').map(str::to_owned).collect())
            .collect();
        assert_eq!(rows.len(), 3);
        // Closed-form column drops by 2^-4 per waist doubling.
        let cf: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
        assert_relative_eq!(cf[1] / cf[0], 2.0f64.powi(-4), max_relative = 1e-12);
        assert_relative_eq!(cf[2] / cf[1], 2.0f64.powi(-4), max_relative = 1e-12);
        // Quadrature tracks it and the relative difference shrinks with waist.
        let rel: Vec<f64> = rows.iter().map(|r| r[7].parse().unwrap()).collect();
        assert!(rel[0] > rel[1] && rel[1] > rel[2]);
        // Error column is empty on success.
        assert!(rows.iter().all(|r| r[8].is_empty()));

        // Determinism: byte-identical on a second run.
        let again = run_sweep(&doc, &spec, GouyConvention::Modulus).unwrap();
        assert_eq!(csv, again);

        // Round trip through the CSV parser feeds the fitter. At these small
        // waists the quadrature still carries finite-size corrections of a
        // few e-3, so the fitted exponent is only that close to -4.
        let pts = parse_sweep_csv(&csv).unwrap();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.slope + 4.0).abs() < 1e-2);
    }

    #[test]
    fn sweep_rows_match_single_evaluations() {
        let doc = flip_doc_without_rayleigh();
        let spec = SweepSpec::new(SweepAxis::Waist, vec![150.0, 300.0]).unwrap();
        let csv = run_sweep(&doc, &spec, GouyConvention::Modulus).unwrap();
        let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();

        let resolved = resolve(&doc, Some((SweepAxis::Waist, 150.0))).unwrap();
        let single = evaluate_resolved(&resolved, GouyConvention::Modulus).unwrap();
        assert_eq!(row[2], fmt_f64(single.value.re));
        assert_eq!(row[3], fmt_f64(single.value.im));
    }

    #[test]
    fn per_point_failures_do_not_stop_the_sweep() {
        // Sweeping N across a value that invalidates L = 1 (N = 1) records an
        // error for that row and keeps going.
        let doc = ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0, "rayleigh_range_au": 3141.59},
              "atom_in": {"l": 1, "m": -1},
              "atom_out": {"l": 1, "m": 1},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap();
        let spec = SweepSpec::new(SweepAxis::PrincipalN, vec![1.0, 2.0, 3.0]).unwrap();
        let csv = run_sweep(&doc, &spec, GouyConvention::Modulus).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows[0]
            .split(',')
            .next_back()
            .unwrap()
            .contains("out of range"));
        assert!(rows[1].split(',').next_back().unwrap().is_empty());
        assert!(rows[2].split(',').next_back().unwrap().is_empty());
    }

    #[test]
    fn element_record_echoes_all_inputs() {
        let doc = ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 0, "wavelength_au": 100.0, "rayleigh_range_au": 3.141592653589793e6},
              "atom_in": {"n": 1, "l": 0, "m": 0},
              "atom_out": {"n": 1, "l": 0, "m": 0},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap();
        let record = evaluate_element(&doc, GouyConvention::Modulus).unwrap();
        // Gaussian element at w0 = 1e4.
        assert_relative_eq!(
            record.abs_value,
            2.0 / (std::f64::consts::PI * 1e8),
            max_relative = 1e-6
        );
        assert_eq!(record.method, "forward_quadrature");

        let json: serde_json::Value = serde_json::from_str(&record.to_json()).unwrap();
        for path in [
            "/config/beam/p",
            "/config/beam/ell",
            "/config/beam/wavelength_au",
            "/config/beam/rayleigh_range_au",
            "/config/beam_out/ell",
            "/config/atom_in/n",
            "/config/atom_out/m",
            "/config/scattering/mode",
            "/config/scattering/theta_deg",
            "/config/scattering/elastic",
            "/config/scattering/polarization_overlap",
            "/config/scattering/q_convention",
            "/config/quadrature/rel_tol",
            "/config/quadrature/max_doublings",
            "/value_re",
            "/error_estimate",
            "/method",
            "/rescale_power",
        ] {
            assert!(json.pointer(path).is_some(), "missing {path}");
        }
    }

    #[test]
    fn forbidden_flip_records_a_zero_value() {
        let doc = ConfigDocument::from_json(
            r#"{
              "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0, "rayleigh_range_au": 3141.59},
              "atom_in": {"n": 2, "l": 1, "m": 0},
              "atom_out": {"n": 2, "l": 1, "m": 0},
              "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
            }"#,
        )
        .unwrap();
        let record = evaluate_element(&doc, GouyConvention::Modulus).unwrap();
        assert_eq!(record.value_re, 0.0);
        assert_eq!(record.value_im, 0.0);
        assert_eq!(record.method, "forward_quadrature");
    }
}
