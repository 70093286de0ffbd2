//! Map the azimuthal selection rule of the winding flip: the transition
//! survives only when the atom absorbs exactly 2 ell units of angular
//! momentum, and no magnetic pair can do that once L_i + L_f < 2 |ell|.
//!
//! ```text
//! cargo run --example selection_rules
//! ```

use oamflip::melement::{azimuthal_selection, forward_flip_element};
use oamflip::{BeamMode, HydrogenState, QuadratureSpec};

fn main() -> Result<(), oamflip::Error> {
    let beam = BeamMode::from_waist(0, 1, 10.0, 100.0)?;
    let spec = QuadratureSpec::for_states(2, 2);

    println!("ell = 1 flip on N = 2, L = 1: |M| over all magnetic pairs");
    println!(
        "{:>6} {:>6} {:>13} {:>14}",
        "M_in", "M_out", "net winding", "|M|"
    );
    for m_in in -1..=1i32 {
        for m_out in -1..=1i32 {
            let net = azimuthal_selection(1, -1, m_in, m_out);
            let out = forward_flip_element(
                &beam,
                &HydrogenState::new(2, 1, m_in)?,
                &HydrogenState::new(2, 1, m_out)?,
                &spec,
            )?;
            println!(
                "{m_in:>6} {m_out:>6} {net:>13} {:>14.6e}{}",
                out.value.norm(),
                if net == 0 { "  <- allowed" } else { "" }
            );
        }
    }

    // ell = 2 with L_i = L_f = 1: the required four units of angular momentum
    // cannot fit, so every pair vanishes identically.
    let beam2 = BeamMode::from_waist(0, 2, 10.0, 100.0)?;
    let spec3 = QuadratureSpec::for_states(3, 3);
    let mut worst = 0.0f64;
    for m_in in -1..=1i32 {
        for m_out in -1..=1i32 {
            let out = forward_flip_element(
                &beam2,
                &HydrogenState::new(3, 1, m_in)?,
                &HydrogenState::new(3, 1, m_out)?,
                &spec3,
            )?;
            worst = worst.max(out.value.norm());
        }
    }
    println!("\nell = 2 flip with L_i = L_f = 1: largest |M| over all pairs = {worst:.1e}");
    Ok(())
}
