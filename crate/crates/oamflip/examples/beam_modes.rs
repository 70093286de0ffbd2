//! Laguerre-Gaussian mode evaluation: transverse profiles, the on-axis
//! vortex null, beam geometry, and the Gouy phase's independence of the
//! winding sign.
//!
//! ```text
//! cargo run --example beam_modes
//! ```

use oamflip::beams::{beam_width, gouy_phase, lg_mode_cylindrical, vector_potential_amplitude};
use oamflip::BeamMode;

fn main() -> Result<(), oamflip::Error> {
    let mode = BeamMode::from_waist(0, 2, 2.0, 5.0)?;
    println!(
        "mode p = {}, ell = {}: waist {:.3} bohr, Rayleigh range {:.3} bohr, k = {:.4} bohr^-1, paraxial = {}",
        mode.p(),
        mode.ell(),
        mode.waist(),
        mode.rayleigh_range(),
        mode.wavenumber(),
        mode.is_paraxial()
    );

    println!("\nbeam width along the axis:");
    for z in [0.0, 0.5, 1.0, 2.0] {
        let z = z * mode.rayleigh_range();
        println!("  w({z:>6.2}) = {:.6}", beam_width(&mode, z));
    }

    println!("\ntransverse profile magnitude at z = 0 (vortex core at rho = 0):");
    for rho in [0.0, 1.0, 2.5, 5.0, 10.0, 20.0] {
        let u = lg_mode_cylindrical(&mode, rho, 0.0, 0.0);
        println!("  |u({rho:>5.1})| = {:.6e}", u.norm());
    }

    println!("\ngouy phase carries |ell|, so both winding signs march together:");
    for z in [0.25, 1.0, 4.0] {
        let plus = gouy_phase(0, 2, z, mode.rayleigh_range());
        let minus = gouy_phase(0, -2, z, mode.rayleigh_range());
        println!("  z = {z:>5.2}: gouy(+2) = {plus:.8}, gouy(-2) = {minus:.8}");
    }

    let a = vector_potential_amplitude(&mode, 3.0, 0.7, 0.4);
    println!(
        "\nscalar vector-potential amplitude at (r, theta, phi) = (3, 0.7, 0.4): {:.6e} + {:.6e} i",
        a.re, a.im
    );
    Ok(())
}
