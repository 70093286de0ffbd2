//! Self-validation suite: every structural invariant the library promises,
//! bundled into one deterministic pass/fail report.
//!
//! The report is rendered with fixed formatting and no timestamps, so two
//! runs of the same build produce byte-identical output.

use crate::beams::{beam_width, gouy_phase, lg_mode_cylindrical, BeamMode, GouyConvention};
use crate::config::ConfigDocument;
use crate::melement::{
    closed_form_flip_element, forward_flip_element, twisted_element, QConvention, ScatteringChannel,
};
use crate::quad::{integrate_2d_after_phi_x, integrate_3d, QuadratureSpec};
use crate::scan::{fit_power_law, run_sweep, SweepAxis, SweepSpec};
use crate::specfun::{
    angular_moment, assoc_laguerre, binomial, hydrogen_radial, hydrogen_wavefunction,
    radial_moment, spherical_harmonic, theta_profile, HydrogenState,
};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Tolerance profile for the suite; `Tight` shrinks quadrature tolerances a
/// hundredfold without changing any pass thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Default,
    Tight,
}

impl Profile {
    pub fn as_str(&self) -> &'static str {
        match self {
            Profile::Default => "default",
            Profile::Tight => "tight",
        }
    }

    fn rel_tol(&self, base: f64) -> f64 {
        match self {
            Profile::Default => base,
            Profile::Tight => (base * 1e-2).max(1e-13),
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "default" => Ok(Profile::Default),
            "tight" => Ok(Profile::Tight),
            other => Err(crate::error::Error::config(
                "profile",
                format!("expected default | tight, got {other:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub profile: Profile,
    pub gouy: GouyConvention,
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Stable textual rendering; byte-identical across runs of one build.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("oamflip validation suite\n");
        let _ = writeln!(out, "profile: {}", self.profile.as_str());
        let _ = writeln!(
            out,
            "gouy convention: {}",
            match self.gouy {
                GouyConvention::Modulus => "modulus",
                GouyConvention::Signed => "signed (mutated)",
            }
        );
        out.push('\n');
        for (i, check) in self.checks.iter().enumerate() {
            let dots = 58usize.saturating_sub(check.name.len());
            let _ = writeln!(
                out,
                "{:>2}. {} {} {} ({})",
                i + 1,
                check.name,
                ".".repeat(dots.max(2)),
                if check.passed { "pass" } else { "FAIL" },
                check.detail
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "\n{} checks: {} passed, {} failed",
            self.checks.len(),
            passed,
            self.checks.len() - passed
        );
        out
    }
}

fn state(n: u32, l: u32, m: i32) -> HydrogenState {
    HydrogenState::new(n, l, m).expect("suite states are valid")
}

/// Overlap of two bound states with the azimuthal integral done analytically.
fn overlap_2d(a: &HydrogenState, b: &HydrogenState, rel_tol: f64) -> Complex64 {
    if a.m() != b.m() {
        return Complex64::new(0.0, 0.0);
    }
    let spec = QuadratureSpec {
        rel_tol,
        ..QuadratureSpec::for_states(a.n(), b.n())
    };
    let (na, la, nb, lb, m) = (a.n(), a.l(), b.n(), b.l(), a.m());
    integrate_2d_after_phi_x(
        move |r, x| {
            Complex64::new(
                hydrogen_radial(na, la, r)
                    * hydrogen_radial(nb, lb, r)
                    * theta_profile(la, m, x)
                    * theta_profile(lb, m, x)
                    / (2.0 * PI),
                0.0,
            )
        },
        true,
        &spec,
    )
    .value
}

fn all_states_through(n_max: u32) -> Vec<HydrogenState> {
    let mut v = Vec::new();
    for n in 1..=n_max {
        for l in 0..n {
            for m in -(l as i32)..=(l as i32) {
                v.push(state(n, l, m));
            }
        }
    }
    v
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn hydrogen_orthonormality(profile: Profile) -> CheckOutcome {
    let states = all_states_through(4);
    let mut max_dev = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in states.iter().skip(i) {
            let want = if a == b { 1.0 } else { 0.0 };
            let got = overlap_2d(a, b, profile.rel_tol(1e-12));
            max_dev = max_dev.max((got - want).norm());
        }
    }
    // Spot checks through the full 3D rule, including mixed magnetic numbers.
    let pairs = [
        (state(1, 0, 0), state(1, 0, 0)),
        (state(2, 1, 1), state(2, 1, 1)),
        (state(2, 1, 0), state(1, 0, 0)),
        (state(3, 2, -1), state(3, 2, 1)),
        (state(4, 1, 0), state(2, 1, 0)),
    ];
    for (a, b) in pairs {
        let spec = QuadratureSpec {
            rel_tol: profile.rel_tol(1e-12),
            ..QuadratureSpec::for_states(a.n(), b.n())
        };
        let got = integrate_3d(
            |r, th, ph| {
                hydrogen_wavefunction(&a, r, th, ph).conj() * hydrogen_wavefunction(&b, r, th, ph)
            },
            &spec,
        )
        .value;
        let want = if a == b { 1.0 } else { 0.0 };
        max_dev = max_dev.max((got - want).norm());
    }
    check(
        "hydrogen orthonormality (N <= 4)",
        max_dev < 1e-10,
        format!("max deviation {max_dev:.3e}"),
    )
}

fn laguerre_origin_values() -> CheckOutcome {
    let mut exact = true;
    for p in 0..=10u32 {
        for alpha in 0..=10u32 {
            if assoc_laguerre(p, alpha, 0.0) != binomial(p + alpha, p) {
                exact = false;
            }
        }
    }
    check(
        "laguerre binomial values at the origin",
        exact,
        if exact { "exact" } else { "mismatch" }.to_string(),
    )
}

fn radial_moment_normalization() -> CheckOutcome {
    let mut max_dev = 0.0f64;
    for n in 1..=6u32 {
        for l in 0..n {
            max_dev = max_dev.max((radial_moment(n, l, l, 0) - 1.0).abs());
        }
    }
    check(
        "radial moment normalization (N <= 6)",
        max_dev < 1e-12,
        format!("max deviation {max_dev:.3e}"),
    )
}

fn angular_selection_zeros() -> CheckOutcome {
    let mut ok = true;
    for l in 0..=3u32 {
        for mi in -(l as i32)..=(l as i32) {
            for mf in -(l as i32)..=(l as i32) {
                for winding in -4..=4i32 {
                    if winding != mf - mi && angular_moment(l, mi, l, mf, 2, winding) != 0.0 {
                        ok = false;
                    }
                }
            }
        }
    }
    check(
        "angular moment azimuthal selection",
        ok,
        if ok { "exact zeros" } else { "nonzero leak" }.to_string(),
    )
}

fn circular_moment_growth() -> CheckOutcome {
    // Exact closed form for the stretched states: <r^k> = (N/2)^k (2N+k)!/(2N)!.
    let exact = |n: u32, k: u32| -> f64 {
        let mut acc = (f64::from(n) / 2.0).powi(k as i32);
        for j in (2 * n + 1)..=(2 * n + k) {
            acc *= f64::from(j);
        }
        acc
    };
    let mut max_dev = 0.0f64;
    for n in 2..=6u32 {
        let got = radial_moment(n, n - 1, n - 1, 2 * (n - 1)).ln();
        let prev = radial_moment(n - 1, n - 2, n - 2, 2 * (n - 2)).ln();
        let want = exact(n, 2 * (n - 1)).ln() - exact(n - 1, 2 * (n - 2)).ln();
        max_dev = max_dev.max(((got - prev) - want).abs());
    }
    check(
        "circular state moment growth",
        max_dev < 1e-8,
        format!("max log-ratio deviation {max_dev:.3e}"),
    )
}

fn transverse_normalization() -> CheckOutcome {
    let rule = crate::quad::laguerre_rule(64);
    let mut max_dev = 0.0f64;
    for p in 0..=3u32 {
        for ell in -3i32..=3 {
            let mode = BeamMode::from_waist(p, ell, 2.0, 7.0).expect("valid mode");
            for frac in [0.0, 0.5, 1.0] {
                let z = frac * mode.rayleigh_range();
                let w = beam_width(&mode, z);
                let norm: f64 = rule
                    .iter()
                    .map(|&(t, wt)| {
                        let rho = (t / 2.0).sqrt() * w;
                        let u = lg_mode_cylindrical(&mode, rho, z, 0.0).norm();
                        // |u|^2 carries the decay the compensated rule expects.
                        wt * u * u * w * w / 4.0 * 2.0 * PI
                    })
                    .sum();
                max_dev = max_dev.max((norm - 1.0).abs());
            }
        }
    }
    check(
        "transverse mode normalization (p <= 3, |ell| <= 3)",
        max_dev < 1e-10,
        format!("max deviation {max_dev:.3e}"),
    )
}

fn gouy_parity() -> CheckOutcome {
    let mut ok = true;
    for p in 0..=4u32 {
        for ell in 0..=5i32 {
            for &z in &[-3.0, -0.7, 0.0, 0.2, 9.0] {
                if gouy_phase(p, ell, z, 2.5) != gouy_phase(p, -ell, z, 2.5) {
                    ok = false;
                }
            }
        }
    }
    check(
        "gouy phase parity in the winding sign",
        ok,
        if ok { "exact" } else { "sign leak" }.to_string(),
    )
}

fn mode_conjugation() -> CheckOutcome {
    let mut max_dev = 0.0f64;
    for p in 0..=2u32 {
        for ell in 1..=3i32 {
            let mode = BeamMode::from_waist(p, ell, 2.0, 5.0).expect("valid mode");
            let flipped = mode.flipped();
            for &(rho, z, phi) in &[(0.3, 0.0, 0.4), (1.9, 2.2, 2.7), (4.0, -1.0, 5.5)] {
                let a = lg_mode_cylindrical(&flipped, rho, z, phi);
                let b = lg_mode_cylindrical(&mode, rho, z, -phi);
                let scale = b.norm().max(1e-30);
                max_dev = max_dev.max((a - b).norm() / scale);
            }
        }
    }
    check(
        "mode conjugation flips the winding",
        max_dev < 1e-14,
        format!("max pointwise deviation {max_dev:.3e}"),
    )
}

fn winding_orthogonality() -> CheckOutcome {
    let rule = crate::quad::laguerre_rule(64);
    let nphi = 32usize;
    let mut max_dev = 0.0f64;
    for (la, lb) in [(0i32, 1i32), (1, 2), (1, 3), (-2, 2)] {
        let ma = BeamMode::from_waist(1, la, 2.0, 5.0).expect("valid mode");
        let mb = BeamMode::from_waist(1, lb, 2.0, 5.0).expect("valid mode");
        let mut acc = Complex64::new(0.0, 0.0);
        for &(t, wt) in rule.iter() {
            let rho = (t / 2.0).sqrt() * ma.waist();
            for j in 0..nphi {
                let phi = 2.0 * PI * (j as f64 + 0.5) / nphi as f64;
                let ua = lg_mode_cylindrical(&ma, rho, 0.0, phi);
                let ub = lg_mode_cylindrical(&mb, rho, 0.0, phi);
                acc +=
                    ua.conj() * ub * (wt * ma.waist() * ma.waist() / 4.0 * 2.0 * PI / nphi as f64);
            }
        }
        max_dev = max_dev.max(acc.norm());
    }
    check(
        "winding orthogonality of transverse modes",
        max_dev < 1e-12,
        format!("max overlap {max_dev:.3e}"),
    )
}

fn gaussian_mode_limit() -> CheckOutcome {
    let mode = BeamMode::from_waist(0, 0, 1.0, 1e6).expect("valid mode");
    let u = lg_mode_cylindrical(&mode, 1.0, 1.0, 0.0) * mode.waist();
    let dev = (u - Complex64::new((2.0 / PI).sqrt(), 0.0)).norm();
    check(
        "gaussian limit of the fundamental mode",
        dev < 1e-10,
        format!("deviation {dev:.3e} at w0 = 1e6"),
    )
}

fn flip_selection_rule(profile: Profile) -> CheckOutcome {
    let beam = BeamMode::from_waist(0, 1, 10.0, 100.0).expect("valid mode");
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-10),
        ..QuadratureSpec::for_states(2, 2)
    };
    let mut ok = true;
    let mut detail = String::from("all 9 pairs as selected");
    for mi in -1..=1i32 {
        for mf in -1..=1i32 {
            let flip = forward_flip_element(&beam, &state(2, 1, mi), &state(2, 1, mf), &spec)
                .expect("valid channel");
            let ch = ScatteringChannel::new(
                beam,
                beam.flipped(),
                state(2, 1, mi),
                state(2, 1, mf),
                0.0,
                true,
                1.0,
            )
            .expect("valid channel");
            let gen = twisted_element(&ch, &spec, GouyConvention::Modulus, QConvention::Exact);
            if mf - mi == 2 {
                if !(flip.value.norm() > 0.0 && gen.value.norm() > 0.0) {
                    ok = false;
                    detail = format!("allowed pair ({mi}, {mf}) vanished");
                }
            } else if flip.value != Complex64::new(0.0, 0.0) || gen.value.norm() > 1e-12 {
                ok = false;
                detail = format!("forbidden pair ({mi}, {mf}) leaked");
            }
        }
    }
    check("forward flip selection rule (ell = 1, N = 2)", ok, detail)
}

fn asymptotic_agreement(profile: Profile) -> CheckOutcome {
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-11),
        ..QuadratureSpec::for_states(2, 2)
    };
    let mut rels = Vec::new();
    for w0 in [1e2, 1e3, 1e4] {
        let beam = BeamMode::from_waist(0, 1, 10.0, w0).expect("valid mode");
        let quad = forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec)
            .expect("valid channel");
        let closed = closed_form_flip_element(&beam, 2).expect("valid channel");
        rels.push((w0, (quad.value - closed.value).norm() / closed.value.norm()));
    }
    let decreasing = rels.windows(2).all(|w| w[1].1 < w[0].1);
    // Observed order in 1/w0 from the fitted slope of rel vs 1/w0.
    let pts: Vec<(f64, f64)> = rels.iter().map(|&(w0, r)| (1.0 / w0, r)).collect();
    let order = fit_power_law(&pts).map(|f| f.slope).unwrap_or(0.0);
    check(
        "quadrature matches closed form as the atom shrinks",
        decreasing && order >= 1.99,
        format!(
            "rel diff {:.3e} -> {:.3e} -> {:.3e}, observed order {order:.3}",
            rels[0].1, rels[1].1, rels[2].1
        ),
    )
}

fn waist_scaling(profile: Profile) -> CheckOutcome {
    let mut max_dev = 0.0f64;
    // Closed-form slopes are exact power laws.
    for (ell, n, want) in [(1i32, 2u32, -4.0), (2, 3, -6.0)] {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&w0| {
                let beam = BeamMode::from_waist(0, ell, 10.0, w0).expect("valid mode");
                (
                    w0,
                    closed_form_flip_element(&beam, n)
                        .expect("valid channel")
                        .value
                        .norm(),
                )
            })
            .collect();
        let slope = fit_power_law(&pts).expect("positive data").slope;
        max_dev = max_dev.max((slope - want).abs());
    }
    // Quadrature slope on a deep grid where finite-size corrections are tiny.
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-11),
        ..QuadratureSpec::for_states(2, 2)
    };
    let pts: Vec<(f64, f64)> = [1e3, 3.1622776601683795e3, 1e4]
        .iter()
        .map(|&w0| {
            let beam = BeamMode::from_waist(0, 1, 10.0, w0).expect("valid mode");
            let m = forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec)
                .expect("valid channel");
            (w0, m.value.norm())
        })
        .collect();
    let slope = fit_power_law(&pts).expect("positive data").slope;
    max_dev = max_dev.max((slope + 4.0).abs());
    check(
        "waist scaling exponent (ell = 1, 2)",
        max_dev < 1e-3,
        format!("max slope deviation {max_dev:.3e}"),
    )
}

/// The falsifier channel: p 0 -> 1 with L 1 -> 2 at N = 3. The physical Gouy
/// phase difference fails to cancel and keeps the polar-odd integrand alive;
/// carrying the winding sign into the Gouy phase cancels the difference and
/// parity forces the element to zero.
fn falsifier_channel() -> ScatteringChannel {
    let beam_in = BeamMode::from_waist(0, 1, 10.0, 100.0).expect("valid mode");
    let beam_out = BeamMode::from_waist(1, -1, 10.0, 100.0).expect("valid mode");
    ScatteringChannel::new(
        beam_in,
        beam_out,
        state(3, 1, -1),
        state(3, 2, 1),
        0.0,
        true,
        1.0,
    )
    .expect("valid channel")
}

fn gouy_falsifier(profile: Profile, gouy: GouyConvention) -> CheckOutcome {
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-10),
        ..QuadratureSpec::for_states(3, 3)
    };
    let ch = falsifier_channel();
    let reference = twisted_element(&ch, &spec, gouy, QConvention::Exact);
    let mutated = twisted_element(&ch, &spec, GouyConvention::Signed, QConvention::Exact);
    let ref_mag = reference.value.norm();
    let floor = 1e3 * reference.error_estimate.max(1e-300);
    if ref_mag <= floor {
        return check(
            "gouy parity falsifier (p-mixing flip channel)",
            false,
            format!("reference element vanished ({ref_mag:.3e}); winding sign leaked into the gouy phase"),
        );
    }
    let ratio = mutated.value.norm() / ref_mag;
    check(
        "gouy parity falsifier (p-mixing flip channel)",
        ratio < 1e-10,
        format!("mutated/reference magnitude ratio {ratio:.3e}"),
    )
}

fn mirror_symmetry(profile: Profile) -> CheckOutcome {
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-11),
        ..QuadratureSpec::for_states(2, 2)
    };
    let plus = forward_flip_element(
        &BeamMode::from_waist(0, 1, 10.0, 150.0).expect("valid mode"),
        &state(2, 1, -1),
        &state(2, 1, 1),
        &spec,
    )
    .expect("valid channel");
    let minus = forward_flip_element(
        &BeamMode::from_waist(0, -1, 10.0, 150.0).expect("valid mode"),
        &state(2, 1, 1),
        &state(2, 1, -1),
        &spec,
    )
    .expect("valid channel");
    let dev = (plus.value.norm() - minus.value.norm()).abs() / plus.value.norm();
    check(
        "azimuthal mirror symmetry",
        dev < 1e-13,
        format!("relative magnitude split {dev:.3e}"),
    )
}

fn angular_restriction() -> CheckOutcome {
    let beam = BeamMode::from_waist(0, 2, 10.0, 200.0).expect("valid mode");
    let spec = QuadratureSpec::for_states(3, 3);
    let mut ok = true;
    for mi in -1..=1i32 {
        for mf in -1..=1i32 {
            let out = forward_flip_element(&beam, &state(3, 1, mi), &state(3, 1, mf), &spec)
                .expect("valid channel");
            if out.value != Complex64::new(0.0, 0.0) {
                ok = false;
            }
        }
    }
    check(
        "angular restriction L_i + L_f >= 2|ell|",
        ok,
        if ok {
            "exact zero for ell = 2 with L = 1".to_string()
        } else {
            "leak".to_string()
        },
    )
}

fn plane_wave_reduction(profile: Profile) -> CheckOutcome {
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-11),
        ..QuadratureSpec::for_states(1, 1)
    };
    let beam = BeamMode::from_waist(0, 0, 100.0, 1e4).expect("valid mode");
    let out = forward_flip_element(&beam, &state(1, 0, 0), &state(1, 0, 0), &spec)
        .expect("valid channel");
    let scaled = out.value * PI * beam.waist() * beam.waist() / 2.0;
    let dev = (scaled - Complex64::new(1.0, 0.0)).norm();
    check(
        "plane-wave reduction of the gaussian channel",
        dev < 1e-6,
        format!("|scaled - 1| = {dev:.3e} at w0 = 1e4"),
    )
}

fn quadrature_determinism(profile: Profile) -> CheckOutcome {
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-10),
        ..QuadratureSpec::for_states(2, 2)
    };
    let beam = BeamMode::from_waist(0, 1, 10.0, 250.0).expect("valid mode");
    let run = || {
        forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec)
            .expect("valid channel")
    };
    let a = run();
    let b = run();
    let identical = a.value.re.to_bits() == b.value.re.to_bits()
        && a.value.im.to_bits() == b.value.im.to_bits()
        && a.error_estimate.to_bits() == b.error_estimate.to_bits();
    check(
        "quadrature determinism",
        identical,
        if identical {
            "bit-identical repeat".to_string()
        } else {
            "results drifted between runs".to_string()
        },
    )
}

fn refinement_monotonicity(profile: Profile) -> CheckOutcome {
    // Drive the quadrature layer directly on suite-style integrands, starting
    // from coarse grids so at least two refinements happen.
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut inspect = |deltas: &[f64]| {
        if deltas.len() >= 2 {
            let (a, b) = (deltas[deltas.len() - 2], deltas[deltas.len() - 1]);
            if b > a {
                ok = false;
                worst = worst.max(b / a.max(1e-300));
            }
        }
    };
    for w0 in [1e2, 1e3] {
        let beam = BeamMode::from_waist(0, 1, 10.0, w0).expect("valid mode");
        let spec = QuadratureSpec {
            rel_tol: profile.rel_tol(1e-12),
            initial_orders: (10, 8, 8),
            ..QuadratureSpec::for_states(2, 2)
        };
        let out = integrate_2d_after_phi_x(
            |r, x| {
                let sin_th = (1.0 - x * x).max(0.0).sqrt();
                let u = lg_mode_cylindrical(&beam, r * sin_th, r * x, 0.0).norm();
                Complex64::new(
                    u * u * hydrogen_radial(2, 1, r).powi(2) * theta_profile(1, 0, x).powi(2)
                        / (2.0 * PI),
                    0.0,
                )
            },
            true,
            &spec,
        );
        inspect(&out.deltas);
    }
    let spec = QuadratureSpec {
        rel_tol: profile.rel_tol(1e-12),
        initial_orders: (10, 8, 8),
        ..QuadratureSpec::for_states(1, 1)
    };
    let s100 = state(1, 0, 0);
    let out = integrate_3d(
        |r, th, ph| {
            let psi = hydrogen_wavefunction(&s100, r, th, ph);
            psi.conj() * psi * (1.0 + 0.3 * (2.0 * r).sin())
        },
        &spec,
    );
    inspect(&out.deltas);
    check(
        "refinement error estimates non-increasing",
        ok,
        if ok {
            "final two refinements shrink".to_string()
        } else {
            format!("grew by {worst:.3e}")
        },
    )
}

fn legendre_exactness() -> CheckOutcome {
    let mut max_dev = 0.0f64;
    for n in [8usize, 16, 32] {
        let rule = crate::quad::legendre_rule(n);
        for k in 0..2 * n {
            let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(k as i32)).sum();
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            max_dev = max_dev.max((got - want).abs());
        }
    }
    check(
        "legendre rule polynomial exactness",
        max_dev < 1e-13,
        format!("max deviation {max_dev:.3e}"),
    )
}

fn radial_scale_robustness(profile: Profile) -> CheckOutcome {
    let rel_tol = profile.rel_tol(1e-10);
    let beam = BeamMode::from_waist(0, 1, 10.0, 1e3).expect("valid mode");
    let mut values = Vec::new();
    for factor in [0.8, 1.0, 1.2] {
        let mut spec = QuadratureSpec::for_states(2, 2).with_rel_tol(rel_tol);
        spec.radial_scale *= factor;
        let out = forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec)
            .expect("valid channel");
        values.push(out.value);
    }
    let base = values[1].norm();
    let spread = values
        .iter()
        .map(|v| (v - values[1]).norm())
        .fold(0.0, f64::max)
        / base;
    check(
        "radial scale robustness (+-20%)",
        spread < rel_tol.max(1e-12) * 10.0,
        format!("relative spread {spread:.3e}"),
    )
}

fn sweep_determinism() -> CheckOutcome {
    let doc = ConfigDocument::from_json(
        r#"{
          "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0},
          "atom_in": {"n": 2, "l": 1, "m": -1},
          "atom_out": {"n": 2, "l": 1, "m": 1},
          "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
        }"#,
    )
    .expect("suite config parses");
    let spec = SweepSpec::new(SweepAxis::Waist, vec![100.0, 200.0, 400.0]).expect("valid spec");
    let a = run_sweep(&doc, &spec, GouyConvention::Modulus).expect("sweep runs");
    let b = run_sweep(&doc, &spec, GouyConvention::Modulus).expect("sweep runs");
    check(
        "sweep output determinism",
        a == b,
        if a == b {
            "byte-identical CSV".to_string()
        } else {
            "CSV drifted between runs".to_string()
        },
    )
}

fn sweep_single_consistency() -> CheckOutcome {
    let doc = ConfigDocument::from_json(
        r#"{
          "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0},
          "atom_in": {"n": 2, "l": 1, "m": -1},
          "atom_out": {"n": 2, "l": 1, "m": 1},
          "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
        }"#,
    )
    .expect("suite config parses");
    let spec = SweepSpec::new(SweepAxis::Waist, vec![150.0, 300.0]).expect("valid spec");
    let csv = run_sweep(&doc, &spec, GouyConvention::Modulus).expect("sweep runs");
    let resolved = crate::config::resolve(&doc, Some((SweepAxis::Waist, 150.0))).expect("resolves");
    let single =
        crate::scan::evaluate_resolved(&resolved, GouyConvention::Modulus).expect("evaluates");
    let row: Vec<&str> = csv.lines().nth(1).expect("row").split(',').collect();
    let ok = row[2] == format!("{:.16e}", single.value.re)
        && row[3] == format!("{:.16e}", single.value.im);
    check(
        "sweep rows match single evaluations",
        ok,
        if ok {
            "first row reproduced".to_string()
        } else {
            "row mismatch".to_string()
        },
    )
}

fn record_echo_completeness() -> CheckOutcome {
    let doc = ConfigDocument::from_json(
        r#"{
          "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0, "rayleigh_range_au": 3141.5926535897932},
          "atom_in": {"n": 2, "l": 1, "m": -1},
          "atom_out": {"n": 2, "l": 1, "m": 1},
          "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
        }"#,
    )
    .expect("suite config parses");
    let record = crate::scan::evaluate_element(&doc, GouyConvention::Modulus).expect("evaluates");
    let json: serde_json::Value =
        serde_json::from_str(&record.to_json()).expect("record is valid JSON");
    let paths = [
        "/config/beam/p",
        "/config/beam/ell",
        "/config/beam/wavelength_au",
        "/config/beam/rayleigh_range_au",
        "/config/beam/waist_au",
        "/config/beam_out/p",
        "/config/beam_out/ell",
        "/config/atom_in/n",
        "/config/atom_in/l",
        "/config/atom_in/m",
        "/config/atom_out/n",
        "/config/atom_out/l",
        "/config/atom_out/m",
        "/config/scattering/mode",
        "/config/scattering/theta_deg",
        "/config/scattering/elastic",
        "/config/scattering/polarization_overlap",
        "/config/scattering/q_convention",
        "/config/quadrature/rel_tol",
        "/config/quadrature/max_doublings",
        "/value_re",
        "/value_im",
        "/abs_value",
        "/error_estimate",
        "/method",
        "/rescale_power",
        "/converged",
    ];
    let missing: Vec<&str> = paths
        .iter()
        .filter(|p| json.pointer(p).is_none())
        .copied()
        .collect();
    check(
        "output records echo every physical input",
        missing.is_empty(),
        if missing.is_empty() {
            "all fields present".to_string()
        } else {
            format!("missing {missing:?}")
        },
    )
}

fn harmonic_pin_values() -> CheckOutcome {
    let y00 = spherical_harmonic(0, 0, 0.4, 1.1);
    let y10 = spherical_harmonic(1, 0, 0.0, 0.0);
    let y11 = spherical_harmonic(1, 1, PI / 2.0, 0.0);
    let dev = (y00.re - 0.28209479177387814)
        .abs()
        .max((y10.re - 0.4886025119029199).abs())
        .max((y11.re + 0.34549414947133547).abs());
    check(
        "spherical harmonic reference values",
        dev < 1e-13,
        format!("max deviation {dev:.3e}"),
    )
}

/// Runs every invariant in the suite under the given tolerance profile and
/// (globally applied) Gouy convention.
pub fn run_suite(profile: Profile, gouy: GouyConvention) -> ValidationReport {
    let checks = vec![
        laguerre_origin_values(),
        harmonic_pin_values(),
        hydrogen_orthonormality(profile),
        radial_moment_normalization(),
        angular_selection_zeros(),
        circular_moment_growth(),
        transverse_normalization(),
        gouy_parity(),
        mode_conjugation(),
        winding_orthogonality(),
        gaussian_mode_limit(),
        flip_selection_rule(profile),
        asymptotic_agreement(profile),
        waist_scaling(profile),
        gouy_falsifier(profile, gouy),
        mirror_symmetry(profile),
        angular_restriction(),
        plane_wave_reduction(profile),
        quadrature_determinism(profile),
        refinement_monotonicity(profile),
        legendre_exactness(),
        radial_scale_robustness(profile),
        sweep_determinism(),
        sweep_single_consistency(),
        record_echo_completeness(),
    ];
    ValidationReport {
        profile,
        gouy,
        checks,
    }
}
