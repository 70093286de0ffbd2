//! Acceptance suite: one test per headline capability, each printing a
//! pass/fail line with the measured numbers. Run with `--nocapture` to see
//! every line:
//!
//! ```text
//! cargo test -p oamflip --test acceptance -- --nocapture
//! ```

use num_complex::Complex64;
use oamflip::beams::{lg_mode_cylindrical, BeamMode, GouyConvention};
use oamflip::melement::{
    closed_form_flip_element, dipole_series_term, forward_flip_element,
    generalized_oscillator_strength, twisted_element, QConvention, ScatteringChannel,
};
use oamflip::quad::{integrate_2d_after_phi, QuadratureSpec};
use oamflip::scan::fit_power_law;
use oamflip::specfun::{hydrogen_radial, theta_profile, HydrogenState};
use std::f64::consts::PI;
use std::time::Instant;

const DIPOLE_1S_2P0: f64 = 0.7449355390278029; // 128 sqrt(2) / 243

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn state(n: u32, l: u32, m: i32) -> HydrogenState {
    HydrogenState::new(n, l, m).unwrap()
}

/// Composite Simpson rule: the independent oracle used where a value must be
/// confirmed outside the library's own quadrature.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn criterion_1_selection_rule() {
    let start = Instant::now();
    let beam = BeamMode::from_waist(0, 1, 10.0, 100.0).unwrap();
    let spec = QuadratureSpec::for_states(2, 2).with_rel_tol(1e-10);
    let mut ok = true;
    let mut detail = String::from("9/9 pairs: zero unless M_f - M_i = 2, positive there");
    for mi in -1..=1i32 {
        for mf in -1..=1i32 {
            let out =
                forward_flip_element(&beam, &state(2, 1, mi), &state(2, 1, mf), &spec).unwrap();
            if mf - mi == 2 {
                if out.value.norm() <= 0.0 {
                    ok = false;
                    detail = format!("allowed pair ({mi}, {mf}) vanished");
                }
            } else if out.value != Complex64::new(0.0, 0.0) {
                ok = false;
                detail = format!("forbidden pair ({mi}, {mf}) leaked {}", out.value.norm());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let runtime_ok = elapsed < 10.0;
    report(
        1,
        "forward-flip selection rule",
        ok && runtime_ok,
        &format!("{detail}; {elapsed:.2} s"),
    );
    assert!(ok, "{detail}");
    assert!(runtime_ok, "took {elapsed:.2} s, budget 10 s");
}

#[test]
fn criterion_2_closed_form_agreement() {
    let start = Instant::now();
    let spec = QuadratureSpec::for_states(2, 2).with_rel_tol(1e-11);
    let mut rels = Vec::new();
    for w0 in [1e2, 1e3, 1e4] {
        let beam = BeamMode::from_waist(0, 1, 10.0, w0).unwrap();
        let quad = forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec).unwrap();
        assert!(quad.converged);
        let closed = closed_form_flip_element(&beam, 2).unwrap();
        rels.push((w0, (quad.value - closed.value).norm() / closed.value.norm()));
    }
    let pts: Vec<(f64, f64)> = rels.iter().map(|&(w0, r)| (1.0 / w0, r)).collect();
    let order = fit_power_law(&pts).unwrap().slope;
    let elapsed = start.elapsed().as_secs_f64();

    let order_ok = order >= 1.99;
    let runtime_ok = elapsed < 60.0;
    let tight_ok = rels[0].1 <= 1e-3;
    report(
        2,
        "closed-form agreement",
        tight_ok && order_ok && runtime_ok,
        &format!(
            "rel diff {:.3e} / {:.3e} / {:.3e} at w0 = 1e2/1e3/1e4, observed order {order:.3}, {elapsed:.2} s",
            rels[0].1, rels[1].1, rels[2].1
        ),
    );
    assert!(order_ok, "observed order {order:.3} < 2");
    assert!(runtime_ok, "took {elapsed:.2} s, budget 60 s");
    // Known-unreachable gate, asserted as stated: the finite-waist envelope
    // correction of this channel is 2<rho^4>/<rho^2> / w0^2 = 64/w0^2, which
    // is 6.4e-3 at w0 = 100 — above the 1e-3 gate for every admissible
    // Rayleigh range, since the integrand ratio (w0/w(z))^4 e^{-2 rho^2/w^2}
    // is strictly below one. See the test output above for the measured value.
    assert!(
        tight_ok,
        "relative difference at w0 = 1e2 is {:.4e}, above the 1e-3 gate; \
         the N = 2, ell = 1 channel cannot meet it (envelope correction 64/w0^2 = 6.4e-3)",
        rels[0].1
    );
}

#[test]
fn criterion_3_closed_form_value_with_moment_oracles() {
    // Independent Simpson oracles for the two moments the closed form
    // factors into.
    let radial_oracle = simpson(
        |r| {
            let v = hydrogen_radial(2, 1, r);
            v * v * r.powi(4)
        },
        0.0,
        150.0,
        60_000,
    );
    let angular_oracle = simpson(
        |theta| {
            let x = theta.cos();
            let t = theta_profile(1, 0, x);
            t * t * theta.sin().powi(2) * theta.sin()
        },
        0.0,
        PI,
        20_000,
    );
    let radial_ok = (radial_oracle - 30.0).abs() < 1e-6;
    let angular_ok = (angular_oracle - 0.4).abs() < 1e-8;

    // 48/pi assembled from the oracles: prefactor 4/pi times 30 times 2/5.
    let assembled = 4.0 / PI * radial_oracle * angular_oracle;

    let w0 = 250.0;
    let beam = BeamMode::from_waist(0, 1, 10.0, w0).unwrap();
    let closed = closed_form_flip_element(&beam, 2).unwrap();
    let want = 48.0 / PI / w0.powi(4);
    let rel = (closed.value.re - want).abs() / want;
    let assembled_rel = (assembled - 48.0 / PI).abs() / (48.0 / PI);

    let pass = radial_ok && angular_ok && rel < 1e-10 && assembled_rel < 1e-6;
    report(
        3,
        "closed-form value 48/(pi w0^4)",
        pass,
        &format!(
            "closed form off by {rel:.3e}; oracles: <r^2> = {radial_oracle:.9}, \
             angular factor = {angular_oracle:.9}, assembled 48/pi off by {assembled_rel:.3e}"
        ),
    );
    assert!(radial_ok && angular_ok, "moment oracles drifted");
    assert!(rel < 1e-10, "closed form relative error {rel:.3e}");
    assert!(assembled_rel < 1e-6);
}

#[test]
fn criterion_4_waist_scaling_exponents() {
    let mut details = Vec::new();
    let mut pass = true;
    for (ell, n, want) in [(1i32, 2u32, -4.0f64), (2, 3, -6.0)] {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4]
            .iter()
            .map(|&w0| {
                let beam = BeamMode::from_waist(0, ell, 10.0, w0).unwrap();
                (w0, closed_form_flip_element(&beam, n).unwrap().value.norm())
            })
            .collect();
        let slope = fit_power_law(&pts).unwrap().slope;
        if (slope - want).abs() >= 1e-3 {
            pass = false;
        }
        details.push(format!("ell = {ell}: slope {slope:.6}"));
    }
    // The quadrature itself, on a grid deep enough that finite-size
    // corrections sit below the tolerance.
    let spec = QuadratureSpec::for_states(2, 2).with_rel_tol(1e-11);
    let pts: Vec<(f64, f64)> = [1e3, 3.1622776601683795e3, 1e4]
        .iter()
        .map(|&w0| {
            let beam = BeamMode::from_waist(0, 1, 10.0, w0).unwrap();
            let m = forward_flip_element(&beam, &state(2, 1, -1), &state(2, 1, 1), &spec).unwrap();
            (w0, m.value.norm())
        })
        .collect();
    let qslope = fit_power_law(&pts).unwrap().slope;
    if (qslope + 4.0).abs() >= 1e-3 {
        pass = false;
    }
    details.push(format!("quadrature ell = 1: slope {qslope:.6}"));
    let detail = details.join(", ");
    report(4, "waist-scaling exponents", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_5_gaussian_plane_wave_limit() {
    let beam = BeamMode::from_waist(0, 0, 100.0, 1e4).unwrap();
    let spec = QuadratureSpec::for_states(1, 1).with_rel_tol(1e-11);
    let out = forward_flip_element(&beam, &state(1, 0, 0), &state(1, 0, 0), &spec).unwrap();
    let scaled = out.value * PI * beam.waist() * beam.waist() / 2.0;
    let dev = (scaled - Complex64::new(1.0, 0.0)).norm();
    let pass = dev < 1e-6;
    report(
        5,
        "gaussian / plane-wave limit",
        pass,
        &format!("|value * pi w0^2 / 2 - 1| = {dev:.3e} at w0 = 1e4"),
    );
    assert!(pass, "deviation {dev:.3e} exceeds 1e-6");
}

#[test]
fn criterion_6_gouy_parity_falsifier() {
    // p 0 -> 1 forward channel at N = 3: the physical Gouy phases do not
    // cancel and keep the element alive; carrying the winding sign into the
    // Gouy phase cancels them and the polar-odd integrand dies by parity.
    let beam_in = BeamMode::from_waist(0, 1, 10.0, 100.0).unwrap();
    let beam_out = BeamMode::from_waist(1, -1, 10.0, 100.0).unwrap();
    let ch = ScatteringChannel::new(
        beam_in,
        beam_out,
        state(3, 1, -1),
        state(3, 2, 1),
        0.0,
        true,
        1.0,
    )
    .unwrap();
    let spec = QuadratureSpec::for_states(3, 3).with_rel_tol(1e-10);
    let reference = twisted_element(&ch, &spec, GouyConvention::Modulus, QConvention::Exact);
    let mutated = twisted_element(&ch, &spec, GouyConvention::Signed, QConvention::Exact);
    let alive = reference.value.norm() > 1e3 * reference.error_estimate.max(1e-300);
    let ratio = mutated.value.norm() / reference.value.norm();
    let pass = alive && ratio < 1e-10;
    report(
        6,
        "gouy-parity falsifier",
        pass,
        &format!(
            "reference |M| = {:.3e}, mutated/reference ratio = {ratio:.3e}",
            reference.value.norm()
        ),
    );
    assert!(alive, "reference element vanished");
    assert!(ratio < 1e-10, "mutation ratio {ratio:.3e}");
}

#[test]
fn criterion_7_foundation_suite() {
    // Hydrogen orthonormality through N = 4 via the analytic azimuthal
    // reduction plus the library quadrature.
    let mut states = Vec::new();
    for n in 1..=4u32 {
        for l in 0..n {
            for m in -(l as i32)..=(l as i32) {
                states.push(state(n, l, m));
            }
        }
    }
    let mut ortho_dev = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in states.iter().skip(i) {
            let got = if a.m() != b.m() {
                Complex64::new(0.0, 0.0)
            } else {
                let spec = QuadratureSpec::for_states(a.n(), b.n()).with_rel_tol(1e-12);
                let (na, la, nb, lb, m) = (a.n(), a.l(), b.n(), b.l(), a.m());
                integrate_2d_after_phi(
                    move |r, theta| {
                        let x = theta.cos();
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
            };
            let want = if a == b { 1.0 } else { 0.0 };
            ortho_dev = ortho_dev.max((got - want).norm());
        }
    }
    let ortho_ok = ortho_dev < 1e-10;

    // Transverse mode normalization by an independent Simpson rule in rho.
    let mut norm_dev = 0.0f64;
    for p in 0..=3u32 {
        for ell in -3i32..=3 {
            let mode = BeamMode::from_waist(p, ell, 2.0, 5.0).unwrap();
            let w0 = mode.waist();
            let norm = simpson(
                |rho| {
                    let u = lg_mode_cylindrical(&mode, rho, 0.0, 0.0).norm();
                    u * u * rho * 2.0 * PI
                },
                0.0,
                12.0 * w0,
                40_000,
            );
            norm_dev = norm_dev.max((norm - 1.0).abs());
        }
    }
    let norm_ok = norm_dev < 1e-10;

    // Dipole oracle and the small-q limit of the oscillator strength.
    let dip = dipole_series_term(1.0, 1, &state(1, 0, 0), &state(2, 1, 0)).re;
    let dip_ok = (dip - DIPOLE_1S_2P0).abs() < 1e-8;
    let spec = QuadratureSpec::for_states(1, 2).with_rel_tol(1e-11);
    let gos =
        generalized_oscillator_strength(1e-4, &state(1, 0, 0), &state(2, 1, 0), &spec).unwrap();
    let gos_ok = (gos - 0.208095).abs() < 1e-5;

    let pass = ortho_ok && norm_ok && dip_ok && gos_ok;
    report(
        7,
        "foundation suite",
        pass,
        &format!(
            "orthonormality dev {ortho_dev:.3e}, mode norm dev {norm_dev:.3e}, \
             dipole {dip:.10}, oscillator strength {gos:.7}"
        ),
    );
    assert!(ortho_ok, "orthonormality deviation {ortho_dev:.3e}");
    assert!(norm_ok, "mode normalization deviation {norm_dev:.3e}");
    assert!(dip_ok, "dipole value {dip}");
    assert!(gos_ok, "oscillator strength {gos}");
}

#[test]
fn criterion_8_angular_restriction() {
    let beam = BeamMode::from_waist(0, 2, 10.0, 200.0).unwrap();
    let spec = QuadratureSpec::for_states(3, 3);
    let mut pass = true;
    for mi in -1..=1i32 {
        for mf in -1..=1i32 {
            let out =
                forward_flip_element(&beam, &state(3, 1, mi), &state(3, 1, mf), &spec).unwrap();
            if out.value != Complex64::new(0.0, 0.0) {
                pass = false;
            }
        }
    }
    report(
        8,
        "angular restriction L_i + L_f >= 2|ell|",
        pass,
        "ell = 2 flip with L_i = L_f = 1 returns exactly zero",
    );
    assert!(pass);
}

#[test]
fn criterion_9_validate_report_determinism() {
    let exe = env!("CARGO_BIN_EXE_oamflip");
    let run = || {
        std::process::Command::new(exe)
            .args(["validate", "--profile", "default"])
            .output()
            .expect("validate run")
    };
    let a = run();
    let b = run();
    let identical = a.stdout == b.stdout;
    let clean = a.status.success() && b.status.success();
    let pass = identical && clean;
    report(
        9,
        "validate-suite determinism",
        pass,
        &format!(
            "two runs: {} bytes each, byte-identical = {identical}, exit ok = {clean}",
            a.stdout.len()
        ),
    );
    assert!(identical, "reports differ between runs");
    assert!(
        clean,
        "validate exited nonzero:\n{}",
        String::from_utf8_lossy(&a.stdout)
    );
}
