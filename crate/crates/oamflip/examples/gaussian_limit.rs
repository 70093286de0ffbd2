//! Limits that tie the twisted element back to textbook plane-wave results:
//! the fundamental (ell = 0, p = 0) mode reduces to a Gaussian beam whose
//! forward element times pi w0^2 / 2 recovers the plane-wave overlap, and the
//! generalized oscillator strength reaches its dipole limit at small q.
//!
//! ```text
//! cargo run --example gaussian_limit
//! ```

use oamflip::melement::{
    dipole_series_term, forward_flip_element, generalized_oscillator_strength, plane_wave_element,
};
use oamflip::{BeamMode, HydrogenState, QuadratureSpec};
use std::f64::consts::PI;

fn main() -> Result<(), oamflip::Error> {
    let s1s = HydrogenState::new(1, 0, 0)?;
    let spec = QuadratureSpec::for_states(1, 1).with_rel_tol(1e-11);

    println!("gaussian channel 1s -> 1s: value * pi w0^2 / 2 -> plane-wave overlap 1");
    for w0 in [1e2, 1e3, 1e4] {
        let beam = BeamMode::from_waist(0, 0, 100.0, w0)?;
        let out = forward_flip_element(&beam, &s1s, &s1s, &spec)?;
        let scaled = out.value.re * PI * w0 * w0 / 2.0;
        println!(
            "  w0 = {w0:>8.0}: scaled element = {scaled:.12} (1 - {:.3e})",
            1.0 - scaled
        );
    }
    let pw = plane_wave_element([0.0, 0.0, 0.0], &s1s, &s1s, &spec);
    println!(
        "plane-wave element at q = 0: {} (exact overlap)",
        pw.value.re
    );

    let s2p = HydrogenState::new(2, 1, 0)?;
    let dip = dipole_series_term(1.0, 1, &s1s, &s2p).re;
    println!("\ndipole matrix element <2p0| z |1s> = {dip:.12}");

    let spec12 = QuadratureSpec::for_states(1, 2).with_rel_tol(1e-11);
    println!("generalized oscillator strength, 1s -> 2p0, approaching the dipole limit:");
    for q in [1.0, 0.1, 1e-2, 1e-4] {
        let gos = generalized_oscillator_strength(q, &s1s, &s2p, &spec12)?;
        println!("  q = {q:>7.0e}: {gos:.8}");
    }
    println!("dipole limit (3/8) <z>^2 = {:.8}", 0.375 * dip * dip);
    Ok(())
}
