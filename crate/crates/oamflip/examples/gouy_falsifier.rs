//! The winding flip exists because the Gouy phase depends on |ell|, not ell.
//! This example evaluates a p-mixing forward channel twice: once with the
//! physical phase, once with a sign-carrying mutation. The mutation cancels
//! the Gouy phase difference, and polar parity then kills the element.
//!
//! ```text
//! cargo run --example gouy_falsifier
//! ```

use oamflip::beams::GouyConvention;
use oamflip::melement::{twisted_element, QConvention, ScatteringChannel};
use oamflip::{BeamMode, HydrogenState, QuadratureSpec};

fn main() -> Result<(), oamflip::Error> {
    // ell +1 -> -1 with the radial index moving 0 -> 1 and L moving 1 -> 2 at
    // N = 3: the surviving contribution rides entirely on the uncancelled
    // Gouy phase difference e^{2i atan(z/z_R)}.
    let beam_in = BeamMode::from_waist(0, 1, 10.0, 100.0)?;
    let beam_out = BeamMode::from_waist(1, -1, 10.0, 100.0)?;
    let channel = ScatteringChannel::new(
        beam_in,
        beam_out,
        HydrogenState::new(3, 1, -1)?,
        HydrogenState::new(3, 2, 1)?,
        0.0,
        true,
        1.0,
    )?;
    let spec = QuadratureSpec::for_states(3, 3).with_rel_tol(1e-10);

    let physical = twisted_element(&channel, &spec, GouyConvention::Modulus, QConvention::Exact);
    let mutated = twisted_element(&channel, &spec, GouyConvention::Signed, QConvention::Exact);

    println!(
        "physical gouy (|ell|): M = {:.6e} + {:.6e} i, |M| = {:.6e}",
        physical.value.re,
        physical.value.im,
        physical.value.norm()
    );
    println!(
        "sign-carrying gouy:    M = {:.6e} + {:.6e} i, |M| = {:.6e}",
        mutated.value.re,
        mutated.value.im,
        mutated.value.norm()
    );
    let ratio = mutated.value.norm() / physical.value.norm();
    println!("suppression ratio: {ratio:.3e}");
    println!(
        "\nthe same mutation is available end to end as `oamflip validate --mutate-gouy`,\n\
         which makes exactly the parity-falsifier check fail"
    );
    Ok(())
}
