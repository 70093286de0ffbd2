//! Hydrogen bound states and the special functions behind them.
//!
//! Everything is in atomic units: lengths in bohr, energies in hartree, with
//! hbar, the electron mass, and the elementary charge all equal to one.
//! Spherical harmonics follow the Condon-Shortley phase convention; matrix
//! element phases elsewhere in the crate depend on this choice.

use crate::error::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

/// n! as a double. Exact through n = 18, correctly rounded beyond.
pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Binomial coefficient C(n, k). Exact for every value representable in f64,
/// because each intermediate product and quotient is an exact integer.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

/// Associated Laguerre polynomial L_p^alpha(x), by the three-term recurrence
/// in the lower index. The recurrence stays exact at x = 0 and avoids the
/// cancellation the series form suffers at the large arguments produced by
/// tightly focused beams.
pub fn assoc_laguerre(p: u32, alpha: u32, x: f64) -> f64 {
    let a = f64::from(alpha);
    if p == 0 {
        return 1.0;
    }
    let mut prev = 1.0; // L_0
    let mut cur = 1.0 + a - x; // L_1
    for k in 1..p {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + a - x) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Associated Legendre function P_l^m(x) for 0 <= m <= l, without the
/// Condon-Shortley sign (that phase is applied in [`theta_profile`]).
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    assert!(
        m <= l,
        "assoc_legendre: require m <= l, got l = {l}, m = {m}"
    );
    let s = (1.0 - x * x).max(0.0).sqrt();
    // P_m^m = (2m - 1)!! s^m
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= f64::from(2 * k - 1) * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * f64::from(2 * m + 1) * pmm; // P_{m+1}^m
    for ll in (m + 2)..=l {
        let lf = f64::from(ll);
        let mf = f64::from(m);
        let next = ((2.0 * lf - 1.0) * x * cur - (lf + mf - 1.0) * prev) / (lf - mf);
        prev = cur;
        cur = next;
    }
    cur
}

/// Polar factor of the spherical harmonic Y_{l,m}: real, Condon-Shortley
/// signed, and normalized so the squared profile integrates to one over
/// cos(theta) on [-1, 1]. The full harmonic is
/// `theta_profile(l, m, cos θ) · e^{imφ} / sqrt(2π)`.
pub fn theta_profile(l: u32, m: i32, cos_theta: f64) -> f64 {
    let mabs = m.unsigned_abs();
    assert!(
        mabs <= l,
        "theta_profile: require |m| <= l, got l = {l}, m = {m}"
    );
    let norm = (f64::from(2 * l + 1) / 2.0 * factorial(l - mabs) / factorial(l + mabs)).sqrt();
    let sign = if m > 0 && m % 2 != 0 { -1.0 } else { 1.0 };
    sign * norm * assoc_legendre(l, mabs, cos_theta)
}

/// Complex spherical harmonic Y_{l,m}(θ, φ), Condon-Shortley convention,
/// unit-normalized over the sphere. Panics when |m| > l.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let polar = theta_profile(l, m, theta.cos()) / (2.0 * PI).sqrt();
    polar * Complex64::cis(f64::from(m) * phi)
}

/// Bound-state quantum numbers (N, L, M) of atomic hydrogen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HydrogenState {
    n: u32,
    l: u32,
    m: i32,
}

impl HydrogenState {
    /// Validates 1 <= N, 0 <= L <= N-1, -L <= M <= L.
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::physics("principal quantum number must be >= 1"));
        }
        if l >= n {
            return Err(Error::physics(format!(
                "orbital quantum number out of range: L = {l} with N = {n} (need L <= N-1)"
            )));
        }
        if m.unsigned_abs() > l {
            return Err(Error::physics(format!(
                "magnetic quantum number out of range: M = {m} with L = {l}"
            )));
        }
        Ok(HydrogenState { n, l, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// Bound-state energy -1/(2N^2) in hartree.
    pub fn energy(&self) -> f64 {
        -0.5 / f64::from(self.n * self.n)
    }

    /// Characteristic orbital radius N^2 in bohr; the target size the
    /// closed-form expansions are controlled by.
    pub fn characteristic_radius(&self) -> f64 {
        f64::from(self.n * self.n)
    }
}

/// Radial factor R_{N,L}(r) of the hydrogen wavefunction, in bohr^(-3/2),
/// normalized so that the integral of R^2 r^2 dr over [0, inf) is one.
/// Panics unless L < N and r >= 0.
pub fn hydrogen_radial(n: u32, l: u32, r: f64) -> f64 {
    assert!(n >= 1 && l < n, "hydrogen_radial: require L < N");
    assert!(r >= 0.0, "hydrogen_radial: require r >= 0");
    let nf = f64::from(n);
    let norm = ((2.0 / nf).powi(3) * factorial(n - l - 1) / (2.0 * nf * factorial(n + l))).sqrt();
    let x = 2.0 * r / nf;
    norm * (-r / nf).exp() * x.powi(l as i32) * assoc_laguerre(n - l - 1, 2 * l + 1, x)
}

/// Full bound-state wavefunction R_{N,L}(r) Y_{L,M}(θ, φ).
pub fn hydrogen_wavefunction(state: &HydrogenState, r: f64, theta: f64, phi: f64) -> Complex64 {
    hydrogen_radial(state.n, state.l, r) * spherical_harmonic(state.l, state.m, theta, phi)
}

/// Radial integral ∫ R_{nf,lf} r^power R_{ni,li} r^2 dr between two bound
/// states, evaluated by scaled Gauss-Laguerre quadrature that is exact for
/// the polynomial-times-exponential integrand.
pub(crate) fn radial_integral(ni: u32, li: u32, nf: u32, lf: u32, power: u32) -> f64 {
    assert!(li < ni && lf < nf);
    // Combined decay e^{-r (1/ni + 1/nf)} = e^{-r/scale}.
    let scale = f64::from(ni * nf) / f64::from(ni + nf);
    // Polynomial degree in the substituted variable is at most ni + nf + power,
    // and n Laguerre nodes are exact through degree 2n - 1.
    let order = ((ni + nf + power) / 2 + 3) as usize;
    let rule = crate::quad::laguerre_rule(order);
    let mut acc = 0.0;
    for &(t, w) in rule.iter() {
        let r = scale * t;
        acc += scale
            * w
            * hydrogen_radial(nf, lf, r)
            * hydrogen_radial(ni, li, r)
            * r.powi(power as i32 + 2);
    }
    acc
}

/// Same-N radial moment ⟨ r^power ⟩ between states (N, L_i) and (N, L_f):
/// ∫ R_{N,L_f} r^power R_{N,L_i} r^2 dr, exact up to rounding.
pub fn radial_moment(n: u32, l_i: u32, l_f: u32, power: u32) -> f64 {
    radial_integral(n, l_i, n, l_f, power)
}

/// Angular matrix element ∫ Y_{L_f,M_f}* sin^sin_power(θ) e^{i winding φ}
/// Y_{L_i,M_i} dΩ. The azimuthal integral is done analytically: the result is
/// exactly zero unless winding = M_f - M_i, and real otherwise. `sin_power`
/// must be even, which keeps the polar integrand polynomial in cos(θ) so the
/// fixed-order Gauss-Legendre rule is exact.
pub fn angular_moment(l_i: u32, m_i: i32, l_f: u32, m_f: i32, sin_power: u32, winding: i32) -> f64 {
    assert!(m_i.unsigned_abs() <= l_i && m_f.unsigned_abs() <= l_f);
    assert!(
        sin_power.is_multiple_of(2),
        "angular_moment: sin_power must be even"
    );
    if winding != m_f - m_i {
        return 0.0;
    }
    let order = ((l_i + l_f + sin_power + 2) as usize).max(24);
    let rule = crate::quad::legendre_rule(order);
    let half = (sin_power / 2) as i32;
    let mut acc = 0.0;
    for &(x, w) in rule.iter() {
        acc +=
            w * theta_profile(l_f, m_f, x) * (1.0 - x * x).powi(half) * theta_profile(l_i, m_i, x);
    }
    acc
}
