//! Transition matrix elements for photon scattering on hydrogen.
//!
//! The central object is M = <f| af* . ai e^{iq.r} |i>: the overlap of the
//! conjugated outgoing and incoming photon mode functions with the atomic
//! states, with q the momentum transfer. Plane-wave modes give the familiar
//! Compton-type element; Laguerre-Gaussian modes add the winding phase that
//! lets elastic forward scattering flip the photon winding from ell to -ell
//! while transferring 2 ell units of angular momentum to the magnetic quantum
//! number of the atom.
//!
//! Forward-path evaluations (scattering angle zero) reduce the azimuthal
//! integral analytically: the physical M values of the two atomic states
//! decide the selection rule, while the remaining polar profiles enter at
//! M = 0. That reference convention is what the leading-order and closed-form
//! expressions factor through, so the quadrature, the leading-order product,
//! and the closed form all converge to one another as the atom shrinks
//! relative to the waist. At nonzero scattering angle the full wavefunctions
//! are integrated in 3D with no reduction.

use crate::beams::{
    curvature_phase, envelope, envelope_rescaled, gouy_term, BeamMode, GouyConvention,
};
use crate::error::Error;
use crate::quad::{integrate_2d_after_phi_x, integrate_3d_x, QuadratureSpec, RadialRule};
use crate::specfun::{
    angular_moment, factorial, hydrogen_radial, radial_moment, theta_profile, HydrogenState,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Momentum-transfer convention for elastic kinematics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QConvention {
    /// Exact vector q = k_i - k_f; magnitude 2 k sin(theta/2) when elastic.
    Exact,
    /// Small-angle form with magnitude k sin(theta), directed transverse to
    /// the beam axis.
    SmallAngle,
}

/// How a value in an [`AmplitudeResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    PlaneWave,
    GeneralQuadrature,
    ForwardQuadrature,
    LeadingOrder,
    ClosedForm,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::PlaneWave => "plane_wave",
            Method::GeneralQuadrature => "general_quadrature",
            Method::ForwardQuadrature => "forward_quadrature",
            Method::LeadingOrder => "leading_order",
            Method::ClosedForm => "closed_form",
        }
    }
}

/// A matrix-element value with its evaluation metadata.
///
/// When the underflow guard engages, `value` is the matrix element times
/// w0^rescale_power; `rescale_power` is zero otherwise.
#[derive(Debug, Clone)]
pub struct AmplitudeResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub method: Method,
    pub rescale_power: i32,
    pub converged: bool,
}

impl AmplitudeResult {
    fn exact(value: Complex64, method: Method) -> Self {
        AmplitudeResult {
            value,
            error_estimate: 0.0,
            method,
            rescale_power: 0,
            converged: true,
        }
    }
}

/// One scattering configuration: beams in and out, atomic states in and out,
/// scattering angle, and the polarization overlap that multiplies the scalar
/// matrix element.
#[derive(Debug, Clone)]
pub struct ScatteringChannel {
    beam_in: BeamMode,
    beam_out: BeamMode,
    atom_in: HydrogenState,
    atom_out: HydrogenState,
    theta_scatter: f64,
    elastic: bool,
    polarization_overlap: f64,
}

impl ScatteringChannel {
    pub fn new(
        beam_in: BeamMode,
        beam_out: BeamMode,
        atom_in: HydrogenState,
        atom_out: HydrogenState,
        theta_scatter: f64,
        elastic: bool,
        polarization_overlap: f64,
    ) -> Result<Self, Error> {
        if !theta_scatter.is_finite() || !(0.0..=PI).contains(&theta_scatter) {
            return Err(Error::physics(
                "scattering angle must lie in [0, pi] radians",
            ));
        }
        if !(-1.0..=1.0).contains(&polarization_overlap) {
            return Err(Error::physics("polarization overlap must lie in [-1, 1]"));
        }
        if elastic {
            if beam_in.wavelength() != beam_out.wavelength() {
                return Err(Error::physics(
                    "elastic channel requires equal photon wavenumbers in and out",
                ));
            }
            if atom_in.n() != atom_out.n() {
                return Err(Error::physics(
                    "elastic channel requires equal atomic energies (equal N)",
                ));
            }
        }
        Ok(ScatteringChannel {
            beam_in,
            beam_out,
            atom_in,
            atom_out,
            theta_scatter,
            elastic,
            polarization_overlap,
        })
    }

    pub fn beam_in(&self) -> &BeamMode {
        &self.beam_in
    }

    pub fn beam_out(&self) -> &BeamMode {
        &self.beam_out
    }

    pub fn atom_in(&self) -> &HydrogenState {
        &self.atom_in
    }

    pub fn atom_out(&self) -> &HydrogenState {
        &self.atom_out
    }

    pub fn theta_scatter(&self) -> f64 {
        self.theta_scatter
    }

    pub fn elastic(&self) -> bool {
        self.elastic
    }

    pub fn polarization_overlap(&self) -> f64 {
        self.polarization_overlap
    }

    /// Momentum transfer q = k_i - k_f as a Cartesian vector in bohr^-1, with
    /// the incoming beam along +z and the outgoing beam rotated by the
    /// scattering angle about y. Exactly zero for elastic forward scattering.
    pub fn momentum_transfer(&self, convention: QConvention) -> [f64; 3] {
        let ki = self.beam_in.wavenumber();
        let kf = self.beam_out.wavenumber();
        let (st, ct) = self.theta_scatter.sin_cos();
        match convention {
            QConvention::Exact => [-kf * st, 0.0, ki - kf * ct],
            QConvention::SmallAngle => [-ki * st, 0.0, 0.0],
        }
    }

    /// Quadrature defaults matched to this channel's atomic states.
    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec::for_states(self.atom_in.n(), self.atom_out.n())
    }
}

/// Net azimuthal winding of a channel: ell_in - ell_out + M_in - M_out.
/// The transition survives the phi integral iff this is zero; for the flip
/// case ell_out = -ell_in it reads M_out - M_in = 2 ell.
pub fn azimuthal_selection(ell_in: i32, ell_out: i32, m_in: i32, m_out: i32) -> i32 {
    ell_in - ell_out + m_in - m_out
}

/// Polar power moment ∫ Θ_f(x) x^power Θ_i(x) dx with the physical M values,
/// by a Gauss-Legendre rule exact for the polynomial integrand.
fn polar_power_moment(l_i: u32, m_i: i32, l_f: u32, m_f: i32, power: u32) -> f64 {
    let order = ((l_i + l_f + power + 2) as usize).max(24);
    let rule = crate::quad::legendre_rule(order);
    rule.iter()
        .map(|&(x, w)| {
            w * theta_profile(l_f, m_f, x) * x.powi(power as i32) * theta_profile(l_i, m_i, x)
        })
        .sum()
}

/// Plane-wave matrix element <f| e^{iq.r} |i>.
///
/// At q = 0 the overlap is the exact Kronecker delta of the two states. For
/// q along z the azimuthal integral reduces analytically and a 2D quadrature
/// remains; general q falls back to full 3D quadrature.
pub fn plane_wave_element(
    q: [f64; 3],
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
    spec: &QuadratureSpec,
) -> AmplitudeResult {
    let (ni, li, mi) = (atom_in.n(), atom_in.l(), atom_in.m());
    let (nf, lf, mf) = (atom_out.n(), atom_out.l(), atom_out.m());
    let qnorm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if qnorm == 0.0 {
        let delta = if atom_in == atom_out { 1.0 } else { 0.0 };
        return AmplitudeResult::exact(Complex64::new(delta, 0.0), Method::PlaneWave);
    }
    let spec = QuadratureSpec {
        radial_rule: RadialRule::MappedLegendre,
        ..spec.clone()
    };
    let out = if q[0] == 0.0 && q[1] == 0.0 {
        let qz = q[2];
        integrate_2d_after_phi_x(
            |r, x| {
                let atoms = hydrogen_radial(nf, lf, r)
                    * hydrogen_radial(ni, li, r)
                    * theta_profile(lf, mf, x)
                    * theta_profile(li, mi, x);
                Complex64::cis(qz * r * x) * (atoms / (2.0 * PI))
            },
            mi == mf,
            &spec,
        )
    } else {
        integrate_3d_x(
            |r, x, phi| {
                let sin_th = (1.0 - x * x).max(0.0).sqrt();
                let dot = r * (q[0] * sin_th * phi.cos() + q[1] * sin_th * phi.sin() + q[2] * x);
                let atoms = hydrogen_radial(nf, lf, r)
                    * hydrogen_radial(ni, li, r)
                    * theta_profile(lf, mf, x)
                    * theta_profile(li, mi, x)
                    / (2.0 * PI);
                Complex64::cis(dot + f64::from(mi - mf) * phi) * atoms
            },
            &spec,
        )
    };
    AmplitudeResult {
        value: out.value,
        error_estimate: out.error,
        method: Method::PlaneWave,
        rescale_power: 0,
        converged: out.converged,
    }
}

/// n-th term of the dipole expansion of e^{iqz}: q^n <f| (r cos theta)^n |i>,
/// evaluated by quadrature rules that are exact for the polynomial integrand.
pub fn dipole_series_term(
    q: f64,
    n: u32,
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
) -> Complex64 {
    if atom_in.m() != atom_out.m() {
        return Complex64::new(0.0, 0.0);
    }
    let radial =
        crate::specfun::radial_integral(atom_in.n(), atom_in.l(), atom_out.n(), atom_out.l(), n);
    let polar = polar_power_moment(atom_in.l(), atom_in.m(), atom_out.l(), atom_out.m(), n);
    Complex64::new(q.powi(n as i32) * radial * polar, 0.0)
}

/// Compton-type element for plane-wave photons: the polarization overlap
/// times the plane-wave matrix element at the channel's momentum transfer.
/// Perpendicular polarizations forbid the transition outright.
pub fn compton_element(
    channel: &ScatteringChannel,
    convention: QConvention,
    spec: &QuadratureSpec,
) -> AmplitudeResult {
    let q = channel.momentum_transfer(convention);
    let mut out = plane_wave_element(q, &channel.atom_in, &channel.atom_out, spec);
    out.value *= channel.polarization_overlap;
    out.error_estimate *= channel.polarization_overlap.abs();
    out
}

/// Prefactor of the small-atom expansion for a winding flip:
/// (2 p! / pi (p+|ell|)!) 2^|ell| ((p+|ell|)!/(p! |ell|!))^2.
pub(crate) fn flip_prefactor(p: u32, ell: i32) -> f64 {
    let la = ell.unsigned_abs();
    2.0 * factorial(p) / (PI * factorial(p + la))
        * 2.0f64.powi(la as i32)
        * (factorial(p + la) / (factorial(p) * factorial(la))).powi(2)
}

/// Whether the waist powers of a flip-family element would underflow; when
/// true, values are computed and reported rescaled by w0^(2(|ell|+1)).
fn rescale_engaged(beam: &BeamMode, atom_in: &HydrogenState, atom_out: &HydrogenState) -> bool {
    let la = beam.ell().unsigned_abs();
    if la == 0 {
        return false;
    }
    let a = atom_in
        .characteristic_radius()
        .max(atom_out.characteristic_radius());
    f64::from(la) * (a / beam.waist()).log10() < -120.0
}

struct ForwardSetup<'a> {
    beam_in: &'a BeamMode,
    beam_out: &'a BeamMode,
    atom_in: &'a HydrogenState,
    atom_out: &'a HydrogenState,
    gouy: GouyConvention,
    rescaled: bool,
}

/// Remaining (r, cos theta) integral of a forward-scattering channel after
/// the analytic azimuthal reduction. The polar profiles enter at the M = 0
/// reference; the 1/(2 pi) from the azimuthal normalizations is folded in
/// here and cancelled by the rule's 2 pi factor.
fn forward_quadrature(setup: &ForwardSetup, spec: &QuadratureSpec) -> crate::quad::QuadResult {
    let bi = setup.beam_in;
    let bo = setup.beam_out;
    let (ni, li) = (setup.atom_in.n(), setup.atom_in.l());
    let (nf, lf) = (setup.atom_out.n(), setup.atom_out.l());
    let dk = bi.wavenumber() - bo.wavenumber();
    let gouy = setup.gouy;
    let rescaled = setup.rescaled;
    integrate_2d_after_phi_x(
        move |r, x| {
            let sin_th = (1.0 - x * x).max(0.0).sqrt();
            let rho = r * sin_th;
            let z = r * x;
            let env = if rescaled {
                envelope_rescaled(bi, rho, z) * envelope_rescaled(bo, rho, z)
            } else {
                envelope(bi, rho, z) * envelope(bo, rho, z)
            };
            let phase = curvature_phase(bi, rho, z) - curvature_phase(bo, rho, z)
                + gouy_term(bo, z, gouy)
                - gouy_term(bi, z, gouy)
                + dk * z;
            let atoms = hydrogen_radial(nf, lf, r)
                * hydrogen_radial(ni, li, r)
                * theta_profile(lf, 0, x)
                * theta_profile(li, 0, x);
            Complex64::cis(phase) * (env * atoms / (2.0 * PI))
        },
        true,
        spec,
    )
}

/// General twisted-photon matrix element at arbitrary scattering angle.
///
/// At zero scattering angle the azimuthal integral reduces analytically: a
/// forbidden net winding returns exactly zero, otherwise a 2D quadrature in
/// the reference polar convention remains. At finite angle the conjugated
/// outgoing mode is evaluated on coordinates rotated by the scattering angle
/// about y and the full 3D integral is taken over the physical wavefunctions.
pub fn twisted_element(
    channel: &ScatteringChannel,
    spec: &QuadratureSpec,
    gouy: GouyConvention,
    convention: QConvention,
) -> AmplitudeResult {
    let bi = &channel.beam_in;
    let bo = &channel.beam_out;
    let ai = &channel.atom_in;
    let ao = &channel.atom_out;
    if channel.theta_scatter == 0.0 {
        let net = azimuthal_selection(bi.ell(), bo.ell(), ai.m(), ao.m());
        if net != 0 {
            return AmplitudeResult::exact(Complex64::new(0.0, 0.0), Method::GeneralQuadrature);
        }
        let rescaled = rescale_engaged(bi, ai, ao) || rescale_engaged(bo, ai, ao);
        let spec = QuadratureSpec {
            radial_rule: if channel.elastic {
                RadialRule::LaguerreScaled
            } else {
                RadialRule::MappedLegendre
            },
            ..spec.clone()
        };
        let setup = ForwardSetup {
            beam_in: bi,
            beam_out: bo,
            atom_in: ai,
            atom_out: ao,
            gouy,
            rescaled,
        };
        let out = forward_quadrature(&setup, &spec);
        let rescale_power = if rescaled {
            (bi.ell().unsigned_abs() + bo.ell().unsigned_abs() + 2) as i32
        } else {
            0
        };
        return AmplitudeResult {
            value: out.value,
            error_estimate: out.error,
            method: Method::GeneralQuadrature,
            rescale_power,
            converged: out.converged,
        };
    }

    // Finite scattering angle: rotate the outgoing frame and integrate the
    // physical wavefunctions in 3D. Radial phases rule out the Laguerre rule.
    let spec = QuadratureSpec {
        radial_rule: RadialRule::MappedLegendre,
        ..spec.clone()
    };
    let (st, ct) = channel.theta_scatter.sin_cos();
    let (ki, kf) = (bi.wavenumber(), bo.wavenumber());
    let (ni, li, mi) = (ai.n(), ai.l(), ai.m());
    let (nf, lf, mf) = (ao.n(), ao.l(), ao.m());
    let (elli, ellf) = (bi.ell(), bo.ell());
    let out = integrate_3d_x(
        move |r, x, phi| {
            let sin_th = (1.0 - x * x).max(0.0).sqrt();
            let (sp, cp) = phi.sin_cos();
            let rho = r * sin_th;
            let z = r * x;
            // Outgoing-frame coordinates: z' along the scattered direction.
            let cos_tp = (x * ct + sin_th * cp * st).clamp(-1.0, 1.0);
            let sin_tp = (1.0 - cos_tp * cos_tp).max(0.0).sqrt();
            let zp = r * cos_tp;
            let rhop = r * sin_tp;
            let phip = (sin_th * sp).atan2(sin_th * cp * ct - x * st);

            let amp_i = envelope(bi, rho, z);
            let ph_i = f64::from(elli) * phi + curvature_phase(bi, rho, z) - gouy_term(bi, z, gouy);
            let amp_f = envelope(bo, rhop, zp);
            let ph_f =
                f64::from(ellf) * phip + curvature_phase(bo, rhop, zp) - gouy_term(bo, zp, gouy);

            let plane = match convention {
                QConvention::Exact => ki * z - kf * zp,
                QConvention::SmallAngle => -ki * st * rho * cp,
            };
            let atoms = hydrogen_radial(nf, lf, r)
                * hydrogen_radial(ni, li, r)
                * theta_profile(lf, mf, x)
                * theta_profile(li, mi, x)
                / (2.0 * PI);
            Complex64::cis(ph_i - ph_f + plane + f64::from(mi - mf) * phi) * (amp_i * amp_f * atoms)
        },
        &spec,
    );
    AmplitudeResult {
        value: out.value,
        error_estimate: out.error,
        method: Method::GeneralQuadrature,
        rescale_power: 0,
        converged: out.converged,
    }
}

fn check_flip_preconditions(
    beam: &BeamMode,
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
) -> Result<(), Error> {
    if atom_in.n() != atom_out.n() {
        return Err(Error::physics(
            "forward flip channel requires equal principal quantum numbers",
        ));
    }
    let nmin = beam.ell().unsigned_abs() + 1;
    if atom_in.n() < nmin {
        return Err(Error::physics(format!(
            "forward flip with |ell| = {} requires N >= {nmin}, got N = {}",
            beam.ell().unsigned_abs(),
            atom_in.n()
        )));
    }
    Ok(())
}

/// Forward-elastic winding-flip element: the incoming mode scatters into its
/// ell -> -ell partner with no momentum transfer, handing 2 ell units of
/// angular momentum to the atom. The azimuthal integral is analytic (exact
/// zero when M_out - M_in != 2 ell, no quadrature spent); otherwise the
/// remaining (r, theta) integral is evaluated with the plane-wave factor and
/// the mutually cancelling curvature and Gouy phases identically one.
pub fn forward_flip_element(
    beam: &BeamMode,
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
    spec: &QuadratureSpec,
) -> Result<AmplitudeResult, Error> {
    check_flip_preconditions(beam, atom_in, atom_out)?;
    let beam_out = beam.flipped();
    let net = azimuthal_selection(beam.ell(), beam_out.ell(), atom_in.m(), atom_out.m());
    if net != 0 {
        return Ok(AmplitudeResult::exact(
            Complex64::new(0.0, 0.0),
            Method::ForwardQuadrature,
        ));
    }
    let rescaled = rescale_engaged(beam, atom_in, atom_out);
    let spec = QuadratureSpec {
        radial_rule: RadialRule::LaguerreScaled,
        ..spec.clone()
    };
    let setup = ForwardSetup {
        beam_in: beam,
        beam_out: &beam_out,
        atom_in,
        atom_out,
        gouy: GouyConvention::Modulus,
        rescaled,
    };
    let out = forward_quadrature(&setup, &spec);
    Ok(AmplitudeResult {
        value: out.value,
        error_estimate: out.error,
        method: Method::ForwardQuadrature,
        rescale_power: if rescaled {
            2 * (beam.ell().unsigned_abs() as i32 + 1)
        } else {
            0
        },
        converged: out.converged,
    })
}

/// Leading order of the flip element in (atom size / waist): the prefactor
/// times the factorized radial moment <r^{2|ell|}> and reference angular
/// moment <sin^{2|ell|} theta>, divided by w0^{2(|ell|+1)}.
pub fn leading_order_element(
    beam: &BeamMode,
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
) -> Result<AmplitudeResult, Error> {
    check_flip_preconditions(beam, atom_in, atom_out)?;
    let ell = beam.ell();
    let la = ell.unsigned_abs();
    let net = azimuthal_selection(ell, -ell, atom_in.m(), atom_out.m());
    if net != 0 {
        return Ok(AmplitudeResult::exact(
            Complex64::new(0.0, 0.0),
            Method::LeadingOrder,
        ));
    }
    let rescaled = rescale_engaged(beam, atom_in, atom_out);
    let moments = radial_moment(atom_in.n(), atom_in.l(), atom_out.l(), 2 * la)
        * angular_moment(atom_in.l(), 0, atom_out.l(), 0, 2 * la, 0);
    let scale = if rescaled {
        1.0
    } else {
        beam.waist().powi(-2 * (la as i32 + 1))
    };
    Ok(AmplitudeResult {
        value: Complex64::new(flip_prefactor(beam.p(), ell) * moments * scale, 0.0),
        error_estimate: 0.0,
        method: Method::LeadingOrder,
        rescale_power: if rescaled { 2 * (la as i32 + 1) } else { 0 },
        converged: true,
    })
}

/// Closed form of the flip element for the geometry-matched case
/// L_i = L_f = |ell|: prefactor times <rho^{2|ell|}> / w0^{2(|ell|+1)}, the
/// transverse moment factorizing into radial and angular pieces.
pub fn closed_form_flip_element(beam: &BeamMode, n: u32) -> Result<AmplitudeResult, Error> {
    let ell = beam.ell();
    let la = ell.unsigned_abs();
    if n < la + 1 {
        return Err(Error::physics(format!(
            "closed form requires L_i = L_f = |ell| and therefore N >= {}, got N = {n}",
            la + 1
        )));
    }
    let atom_in = HydrogenState::new(n, la, -ell)?;
    let atom_out = HydrogenState::new(n, la, ell)?;
    let rescaled = rescale_engaged(beam, &atom_in, &atom_out);
    let moments = radial_moment(n, la, la, 2 * la) * angular_moment(la, 0, la, 0, 2 * la, 0);
    let scale = if rescaled {
        1.0
    } else {
        beam.waist().powi(-2 * (la as i32 + 1))
    };
    Ok(AmplitudeResult {
        value: Complex64::new(flip_prefactor(beam.p(), ell) * moments * scale, 0.0),
        error_estimate: 0.0,
        method: Method::ClosedForm,
        rescale_power: if rescaled { 2 * (la as i32 + 1) } else { 0 },
        converged: true,
    })
}

/// Generalized oscillator strength (E_f - E_i) |M|^2 / q^2 for a plane-wave
/// momentum transfer of magnitude q along the quantization axis. Elastic
/// pairs give zero for any q; q itself must be positive.
pub fn generalized_oscillator_strength(
    q: f64,
    atom_in: &HydrogenState,
    atom_out: &HydrogenState,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    if q.is_nan() || q <= 0.0 {
        return Err(Error::physics(
            "generalized oscillator strength requires q > 0",
        ));
    }
    let de = atom_out.energy() - atom_in.energy();
    if de == 0.0 {
        return Ok(0.0);
    }
    let m = plane_wave_element([0.0, 0.0, q], atom_in, atom_out, spec);
    Ok(de * m.value.norm_sqr() / (q * q))
}
