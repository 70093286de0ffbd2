//! Deterministic adaptive quadrature over spherical coordinates.
//!
//! Integrals are evaluated on nested tensor grids: Gauss-Legendre in
//! cos(theta), a uniform periodic rule in phi, and either scaled
//! Gauss-Laguerre (for integrands with a clean exponential radial decay) or
//! mapped Gauss-Legendre on [0, R_cut] (for integrands carrying radial
//! phases) in r. Orders double until two successive estimates agree to the
//! requested relative tolerance; the reported error is the last successive
//! difference.
//!
//! Node evaluations within a refinement level run in parallel, but the
//! reduction order is fixed by node index, so repeated runs are bit-identical
//! regardless of thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Radial treatment for the innermost integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialRule {
    /// Substitute r = radial_scale * t and use Gauss-Laguerre nodes; exact
    /// for polynomials times the matched exponential decay.
    LaguerreScaled,
    /// Mapped Gauss-Legendre on [0, 40 * radial_scale]; robust for integrands
    /// with oscillatory radial phases.
    MappedLegendre,
}

/// Controls for one adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Successive-refinement convergence target, relative to the estimate.
    pub rel_tol: f64,
    /// Magnitudes below this are reported as exactly zero.
    pub abs_floor: f64,
    /// Refinement budget; each doubling doubles every tensor dimension.
    pub max_doublings: u32,
    /// Radial decay length of the integrand in bohr. The Laguerre substitution
    /// uses it directly and the mapped rule integrates to 40 times it.
    pub radial_scale: f64,
    /// Starting orders (n_r, n_theta, n_phi).
    pub initial_orders: (usize, usize, usize),
    pub radial_rule: RadialRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_floor: 1e-30,
            max_doublings: 12,
            radial_scale: 0.5,
            initial_orders: (40, 32, 24),
            radial_rule: RadialRule::LaguerreScaled,
        }
    }
}

impl QuadratureSpec {
    /// Spec matched to the combined decay e^{-r(1/n_i + 1/n_f)} of a product
    /// of bound states with principal quantum numbers `n_i`, `n_f`.
    pub fn for_states(n_i: u32, n_f: u32) -> Self {
        QuadratureSpec {
            radial_scale: f64::from(n_i * n_f) / f64::from(n_i + n_f),
            ..QuadratureSpec::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_radial_rule(mut self, rule: RadialRule) -> Self {
        self.radial_rule = rule;
        self
    }

    /// Truncation radius of the mapped-Legendre rule.
    pub fn r_cut(&self) -> f64 {
        40.0 * self.radial_scale
    }
}

/// Outcome of one adaptive integration.
#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Complex64,
    /// Absolute successive-refinement difference at termination.
    pub error: f64,
    /// False when the refinement budget ran out first.
    pub converged: bool,
    /// Successive differences, one per refinement performed.
    pub deltas: Vec<f64>,
}

impl QuadResult {
    fn exact_zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            converged: true,
            deltas: Vec::new(),
        }
    }
}

// Orders above these caps stop the refinement instead of growing further.
const MAX_LAGUERRE_ORDER: usize = 256;
const MAX_LEGENDRE_ORDER: usize = 4096;
// |estimate| below this multiple of the accumulated absolute mass is
// indistinguishable from rounding noise of an exactly vanishing integral.
const NOISE_FLOOR: f64 = 1e-14;

type RuleCache = Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>;

fn legendre_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn laguerre_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre nodes and weights on [-1, 1], exactly symmetric so that
/// odd integrands cancel to rounding.
pub(crate) fn legendre_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    assert!(n >= 1);
    if let Some(rule) = legendre_cache().lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let mut nodes = vec![(0.0, 0.0); n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        let j = n - 1 - i;
        if i == j {
            nodes[i] = (0.0, w);
        } else {
            nodes[i] = (-z.abs(), w);
            nodes[j] = (z.abs(), w);
        }
    }
    let rule = Arc::new(nodes);
    legendre_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&rule));
    rule
}

/// Scaled Laguerre value and derivative: l~_n(t) = L_n(t) e^{-t/2}, which
/// stays bounded across the node range, plus l~_{n+1} for the weight formula.
fn scaled_laguerre_triplet(n: usize, t: f64) -> (f64, f64, f64) {
    let e = (-0.5 * t).exp();
    let mut lm1 = e; // l~_0
    let mut l = (1.0 - t) * e; // l~_1
    if n == 0 {
        return (lm1, -0.5 * e, l);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - t) * l - kf * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    // d/dt l~_n = n (l~_n - l~_{n-1}) / t - l~_n / 2
    let d = n as f64 * (l - lm1) / t - 0.5 * l;
    let nf = n as f64;
    let lnext = ((2.0 * nf + 1.0 - t) * l - nf * lm1) / (nf + 1.0);
    (l, d, lnext)
}

/// Gauss-Laguerre nodes t_k and exponential-compensated weights
/// w_k e^{t_k}, so that sum w~_k f(t_k) approximates the plain integral of f
/// over [0, inf) when f decays like e^{-t}.
pub(crate) fn laguerre_rule(n: usize) -> Arc<Vec<(f64, f64)>> {
    assert!((1..=MAX_LAGUERRE_ORDER).contains(&n));
    if let Some(rule) = laguerre_cache().lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let mut nodes = Vec::with_capacity(n);
    let mut t = 0.0f64;
    let mut t_prev = 0.0f64;
    for i in 0..n {
        // Stroud-Secrest style initial guesses for the ascending roots.
        if i == 0 {
            t = 3.0 / (1.0 + 2.4 * n as f64);
        } else if i == 1 {
            t_prev = t;
            t += 15.0 / (1.0 + 2.5 * n as f64);
        } else {
            let ai = (i - 1) as f64;
            let step = (1.0 + 2.55 * ai) / (1.9 * ai) * (t - t_prev);
            t_prev = t;
            t += step;
        }
        let mut lnext = 1.0;
        for _ in 0..100 {
            let (l, d, ln1) = scaled_laguerre_triplet(n, t);
            lnext = ln1;
            let step = l / d;
            t -= step;
            if step.abs() < 1e-14 * t.max(1.0) {
                let refreshed = scaled_laguerre_triplet(n, t);
                lnext = refreshed.2;
                break;
            }
        }
        let np1 = (n + 1) as f64;
        let w = t / (np1 * np1 * lnext * lnext);
        nodes.push((t, w));
    }
    let rule = Arc::new(nodes);
    laguerre_cache()
        .lock()
        .unwrap()
        .insert(n, Arc::clone(&rule));
    rule
}

/// Uniform midpoint rule on [0, 2 pi); integrates e^{ik phi} exactly for
/// 0 < |k| < n, which makes azimuthal selection rules hold to rounding.
fn phi_rule(n: usize) -> Vec<(f64, f64)> {
    let w = 2.0 * PI / n as f64;
    (0..n)
        .map(|j| (2.0 * PI * (j as f64 + 0.5) / n as f64, w))
        .collect()
}

/// Radial nodes (r, weight) such that sum w f(r) approximates the integral of
/// f dr over [0, inf) (Laguerre) or [0, r_cut] (mapped Legendre).
fn radial_nodes(spec: &QuadratureSpec, order: usize) -> Vec<(f64, f64)> {
    match spec.radial_rule {
        RadialRule::LaguerreScaled => laguerre_rule(order)
            .iter()
            .map(|&(t, w)| (spec.radial_scale * t, spec.radial_scale * w))
            .collect(),
        RadialRule::MappedLegendre => {
            let half = 0.5 * spec.r_cut();
            legendre_rule(order)
                .iter()
                .map(|&(x, w)| (half * (x + 1.0), half * w))
                .collect()
        }
    }
}

/// Neumaier-compensated complex accumulator; summation order is fixed by the
/// caller, so results are reproducible bit for bit.
#[derive(Clone, Copy, Default)]
struct Accumulator {
    sum_re: f64,
    sum_im: f64,
    c_re: f64,
    c_im: f64,
}

impl Accumulator {
    fn add(&mut self, v: Complex64) {
        let t = self.sum_re + v.re;
        if self.sum_re.abs() >= v.re.abs() {
            self.c_re += (self.sum_re - t) + v.re;
        } else {
            self.c_re += (v.re - t) + self.sum_re;
        }
        self.sum_re = t;
        let t = self.sum_im + v.im;
        if self.sum_im.abs() >= v.im.abs() {
            self.c_im += (self.sum_im - t) + v.im;
        } else {
            self.c_im += (v.im - t) + self.sum_im;
        }
        self.sum_im = t;
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

struct LevelEstimate {
    value: Complex64,
    abs_mass: f64,
}

fn orders_for_level(spec: &QuadratureSpec, level: u32) -> Option<(usize, usize, usize)> {
    let f = 1usize << level;
    let (nr, nth, nph) = spec.initial_orders;
    let nr = nr * f;
    let radial_cap = match spec.radial_rule {
        RadialRule::LaguerreScaled => MAX_LAGUERRE_ORDER,
        RadialRule::MappedLegendre => MAX_LEGENDRE_ORDER,
    };
    if nr > radial_cap || nth * f > MAX_LEGENDRE_ORDER || nph * f > MAX_LEGENDRE_ORDER {
        return None;
    }
    Some((nr, nth * f, nph * f))
}

fn eval_level_3d<F>(f: &F, spec: &QuadratureSpec, orders: (usize, usize, usize)) -> LevelEstimate
where
    F: Fn(f64, f64, f64) -> Complex64 + Sync,
{
    let (nr, nth, nph) = orders;
    let r_nodes = radial_nodes(spec, nr);
    let x_rule = legendre_rule(nth);
    let p_rule = phi_rule(nph);

    // Parallel over radial shells; each shell reduces its angular grid in a
    // fixed order, and the shell results are combined sequentially.
    let rows: Vec<(Complex64, f64)> = r_nodes
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = Accumulator::default();
            let mut mass = 0.0;
            let jac = wr * r * r;
            for &(x, wx) in x_rule.iter() {
                for &(phi, wp) in p_rule.iter() {
                    let v = f(r, x, phi) * (jac * wx * wp);
                    mass += v.norm();
                    acc.add(v);
                }
            }
            (acc.value(), mass)
        })
        .collect();

    let mut acc = Accumulator::default();
    let mut mass = 0.0;
    for (v, m) in rows {
        acc.add(v);
        mass += m;
    }
    LevelEstimate {
        value: acc.value(),
        abs_mass: mass,
    }
}

fn eval_level_2d<F>(f: &F, spec: &QuadratureSpec, orders: (usize, usize)) -> LevelEstimate
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let (nr, nth) = orders;
    let r_nodes = radial_nodes(spec, nr);
    let x_rule = legendre_rule(nth);

    let rows: Vec<(Complex64, f64)> = r_nodes
        .par_iter()
        .map(|&(r, wr)| {
            let mut acc = Accumulator::default();
            let mut mass = 0.0;
            let jac = wr * r * r;
            for &(x, wx) in x_rule.iter() {
                let v = f(r, x) * (jac * wx);
                mass += v.norm();
                acc.add(v);
            }
            (acc.value(), mass)
        })
        .collect();

    let mut acc = Accumulator::default();
    let mut mass = 0.0;
    for (v, m) in rows {
        acc.add(v);
        mass += m;
    }
    LevelEstimate {
        value: acc.value(),
        abs_mass: mass,
    }
}

fn refine(mut eval: impl FnMut(u32) -> Option<LevelEstimate>, spec: &QuadratureSpec) -> QuadResult {
    let mut deltas = Vec::new();
    let first = match eval(0) {
        Some(e) => e,
        None => return QuadResult::exact_zero(),
    };
    let mut prev = first;
    for level in 1..=spec.max_doublings {
        let cur = match eval(level) {
            Some(e) => e,
            // Order cap reached; report the best available estimate with a
            // conservative (full-magnitude) error when nothing refined yet.
            None => {
                return QuadResult {
                    value: prev.value,
                    error: deltas.last().copied().unwrap_or(prev.value.norm()),
                    converged: false,
                    deltas,
                }
            }
        };
        let delta = (cur.value - prev.value).norm();
        deltas.push(delta);
        let mag = cur.value.norm();
        if mag < spec.abs_floor && prev.value.norm() < spec.abs_floor {
            return QuadResult {
                value: Complex64::new(0.0, 0.0),
                error: delta,
                converged: true,
                deltas,
            };
        }
        // An estimate buried under the rounding noise of the absolute mass is
        // an integral that cancels exactly; refining further only burns time.
        if mag <= NOISE_FLOOR * cur.abs_mass || delta <= spec.rel_tol * mag {
            return QuadResult {
                value: cur.value,
                error: delta,
                converged: true,
                deltas,
            };
        }
        prev = cur;
    }
    QuadResult {
        value: prev.value,
        error: deltas.last().copied().unwrap_or(prev.value.norm()),
        converged: false,
        deltas,
    }
}

/// As [`integrate_3d`] but with the integrand given in terms of cos(theta);
/// spares a round trip through acos and keeps polar parity exact.
pub(crate) fn integrate_3d_x<F>(f: F, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64, f64, f64) -> Complex64 + Sync,
{
    refine(
        |level| orders_for_level(spec, level).map(|o| eval_level_3d(&f, spec, o)),
        spec,
    )
}

/// Integral of f(r, theta, phi) over all space with the spherical volume
/// element r^2 sin(theta) dr dtheta dphi included by the rule.
pub fn integrate_3d<F>(f: F, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64, f64, f64) -> Complex64 + Sync,
{
    integrate_3d_x(move |r, x, phi| f(r, x.clamp(-1.0, 1.0).acos(), phi), spec)
}

/// As [`integrate_2d_after_phi`] with the integrand in terms of cos(theta).
pub(crate) fn integrate_2d_after_phi_x<F>(
    f: F,
    winding_ok: bool,
    spec: &QuadratureSpec,
) -> QuadResult
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    if !winding_ok {
        return QuadResult::exact_zero();
    }
    let mut out = refine(
        |level| {
            orders_for_level(spec, level).map(|(nr, nth, _)| eval_level_2d(&f, spec, (nr, nth)))
        },
        spec,
    );
    out.value *= 2.0 * PI;
    out.error *= 2.0 * PI;
    for d in &mut out.deltas {
        *d *= 2.0 * PI;
    }
    out
}

/// Two-dimensional remainder of an integral whose azimuthal part was reduced
/// analytically to a Kronecker delta and a factor 2 pi. Returns zero at zero
/// cost when the winding selection fails; otherwise computes
/// 2 pi * integral of f(r, theta) r^2 sin(theta) dr dtheta.
pub fn integrate_2d_after_phi<F>(f: F, winding_ok: bool, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    integrate_2d_after_phi_x(
        move |r, x| f(r, x.clamp(-1.0, 1.0).acos()),
        winding_ok,
        spec,
    )
}
