//! Sweep the beam waist and fit the power law of the flip element: the
//! magnitude falls as w0^(-2(|ell|+1)), i.e. slope -4 for ell = 1 and -6 for
//! ell = 2, because the transition rate is suppressed by the vanishing beam
//! intensity on the axis.
//!
//! ```text
//! cargo run --example waist_scaling
//! ```

use oamflip::melement::{closed_form_flip_element, forward_flip_element};
use oamflip::scan::fit_power_law;
use oamflip::{BeamMode, HydrogenState, QuadratureSpec};

fn main() -> Result<(), oamflip::Error> {
    for (ell, n) in [(1i32, 2u32), (2, 3)] {
        let la = ell.unsigned_abs();
        let atom_in = HydrogenState::new(n, la, -ell)?;
        let atom_out = HydrogenState::new(n, la, ell)?;
        let spec = QuadratureSpec::for_states(n, n).with_rel_tol(1e-11);

        let mut quad_pts = Vec::new();
        let mut closed_pts = Vec::new();
        for w0 in [1e3, 3.1622776601683795e3, 1e4] {
            let beam = BeamMode::from_waist(0, ell, 10.0, w0)?;
            let q = forward_flip_element(&beam, &atom_in, &atom_out, &spec)?;
            let c = closed_form_flip_element(&beam, n)?;
            quad_pts.push((w0, q.value.norm()));
            closed_pts.push((w0, c.value.norm()));
        }
        let quad_fit = fit_power_law(&quad_pts)?;
        let closed_fit = fit_power_law(&closed_pts)?;
        println!(
            "ell = {ell} (N = {n}, L = {la}): quadrature slope {:+.6}, closed-form slope {:+.6}, expected {:+}",
            quad_fit.slope,
            closed_fit.slope,
            -2 * (la as i32 + 1)
        );
    }
    Ok(())
}
