//! Evaluate the forward-elastic winding-flip matrix element for a twisted
//! beam on hydrogen and compare the quadrature against the small-atom
//! closed form across waists.
//!
//! ```text
//! cargo run --example forward_flip
//! ```

use oamflip::melement::{closed_form_flip_element, forward_flip_element, leading_order_element};
use oamflip::{BeamMode, HydrogenState, QuadratureSpec};

fn main() -> Result<(), oamflip::Error> {
    // ell = 1 flip on the 2p manifold: M goes from -1 to +1, absorbing two
    // units of angular momentum from the photon pair.
    let atom_in = HydrogenState::new(2, 1, -1)?;
    let atom_out = HydrogenState::new(2, 1, 1)?;
    let spec = QuadratureSpec::for_states(2, 2).with_rel_tol(1e-11);

    println!("forward elastic flip, ell = 1 -> -1, 2p(M=-1) -> 2p(M=+1)");
    println!(
        "{:>10}  {:>24}  {:>24}  {:>12}",
        "waist", "quadrature", "closed form", "rel diff"
    );
    for w0 in [1e2, 1e3, 1e4] {
        let beam = BeamMode::from_waist(0, 1, 10.0, w0)?;
        let quad = forward_flip_element(&beam, &atom_in, &atom_out, &spec)?;
        let closed = closed_form_flip_element(&beam, 2)?;
        let rel = (quad.value - closed.value).norm() / closed.value.norm();
        println!(
            "{w0:>10.0}  {:>24.16e}  {:>24.16e}  {rel:>12.3e}",
            quad.value.re, closed.value.re
        );
    }

    let beam = BeamMode::from_waist(0, 1, 10.0, 1e3)?;
    let lead = leading_order_element(&beam, &atom_in, &atom_out)?;
    println!(
        "\nleading-order product at w0 = 1e3: {:.16e} (closed form and leading \
         order coincide when L_i = L_f = |ell|)",
        lead.value.re
    );
    println!(
        "closed form scales as w0^-4 here: value * w0^4 = {:.12} (48/pi = {:.12})",
        closed_form_flip_element(&beam, 2)?.value.re * 1e12,
        48.0 / std::f64::consts::PI
    );
    Ok(())
}
