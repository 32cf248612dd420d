//! Integer-order I-Bessel functions, the cosine-integral variant, the modular
//! helper `A_y(t)`, and the tail bounds used everywhere a lattice sum is
//! truncated.
//!
//! Two evaluation routes exist on purpose: a power series for integer order,
//! and Gauss-Legendre quadrature of `(1/pi) int_0^pi e^{t cos h} cos(x h) dh`.
//! Large-argument paths always work with the shifted integrand
//! `e^{t(cos h - 1)}`, which is bounded by 1 for real `t >= 0`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::{Error, Result};

/// Controls for Bessel evaluation.
#[derive(Debug, Clone, Copy)]
pub struct BesselEvalConfig {
    pub abs_tolerance: f64,
    pub max_series_terms: usize,
    pub quadrature_nodes: usize,
}

impl Default for BesselEvalConfig {
    fn default() -> Self {
        BesselEvalConfig {
            abs_tolerance: 1e-12,
            max_series_terms: 4000,
            quadrature_nodes: 32,
        }
    }
}

impl BesselEvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.abs_tolerance.is_nan() || self.abs_tolerance <= 0.0 {
            return Err(Error::Parse("abs_tolerance must be > 0".into()));
        }
        if self.quadrature_nodes < 16 {
            return Err(Error::Parse("quadrature_nodes must be >= 16".into()));
        }
        Ok(())
    }
}

/// `I_k(t)` for integer order and complex argument, by the defining series.
///
/// Negative orders are reduced to `|k|` first, so the symmetry
/// `I_k = I_{-k}` is exact by construction.
pub fn bessel_i_int(order: i64, t: Complex64, cfg: &BesselEvalConfig) -> Result<Complex64> {
    let k = order.unsigned_abs();
    let half = t / 2.0;
    // leading term (t/2)^k / k!
    let mut term = Complex64::new(1.0, 0.0);
    for j in 1..=k {
        term *= half / j as f64;
    }
    let mut sum = term;
    let h2 = half * half;
    for m in 1..=cfg.max_series_terms {
        term *= h2 / (m as f64 * (m as u64 + k) as f64);
        sum += term;
        let ratio = h2.norm() / ((m as f64 + 1.0) * (m as u64 + k + 1) as f64);
        if ratio < 0.5 {
            let tail = term.norm() * ratio / (1.0 - ratio);
            if tail <= cfg.abs_tolerance {
                return Ok(sum);
            }
        }
    }
    Err(Error::TermBudgetExceeded {
        max_terms: cfg.max_series_terms,
    })
}

/// `e^{-t} I_k(t)` for real `t >= 0`, without intermediate overflow.
///
/// Evaluated as `(1/pi) int_0^pi e^{t(cos h - 1)} cos(k h) dh`; the integrand
/// stays in `[0, 1]`, so this is safe for `t` up to at least `1e6`.
pub fn bessel_i_scaled(order: i64, t: f64) -> f64 {
    assert!(t >= 0.0, "bessel_i_scaled requires t >= 0");
    let k = order.unsigned_abs();
    if t == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    let f = |theta: f64| (t * ((theta).cos() - 1.0)).exp() * (k as f64 * theta).cos();
    // node count scales with the oscillation count and the peak width
    let mut n = 32usize;
    let needed = (2.0 * k as f64).max(4.0 * t.sqrt()).max(32.0);
    while (n as f64) < needed && n < 1 << 14 {
        n *= 2;
    }
    let mut prev = quad_0_pi(&f, n) / PI;
    loop {
        n *= 2;
        let cur = quad_0_pi(&f, n) / PI;
        if (cur - prev).abs() <= 1e-14 || n >= 1 << 16 {
            return cur.clamp(0.0, 1.0);
        }
        prev = cur;
    }
}

/// The cosine integral `(1/pi) int_0^pi e^{t cos h} cos(x h) dh` for real
/// order and complex argument. Agrees with [`bessel_i_int`] at integer order.
pub fn bessel_i_tilde(order: f64, t: Complex64, cfg: &BesselEvalConfig) -> Result<Complex64> {
    let x = order.abs();
    // shift by Re t so the integrand magnitude is bounded by 1
    let shift = t.re.max(0.0);
    let f = |theta: f64| ((t * theta.cos()) - shift).exp() * Complex64::from((x * theta).cos());
    let scale = Complex64::from(shift).exp();
    let needed = (2.0 * x).max(4.0 * t.norm().sqrt()).max(cfg.quadrature_nodes as f64);
    let mut n = cfg.quadrature_nodes.max(16);
    while (n as f64) < needed && n < 1 << 14 {
        n *= 2;
    }
    let mut prev = quad_0_pi_c(&f, n) / PI;
    loop {
        n *= 2;
        let cur = quad_0_pi_c(&f, n) / PI;
        let delta = (cur - prev).norm() * scale.norm();
        // absolute tolerance, relative once the value leaves f64's
        // absolute-precision range
        if delta <= cfg.abs_tolerance * (cur * scale).norm().max(1.0) {
            return Ok(cur * scale);
        }
        if n >= 1 << 17 {
            return Err(Error::QuadratureNotConverged { last_delta: delta });
        }
        prev = cur;
    }
}

/// `A_y(t) = sum_{g in y + mZ} I_g(t)`, by its closed form
/// `(1/m) sum_{j=0}^{m-1} exp(t cos 2 pi j / m) e^{2 pi i y j / m}`.
pub fn a_function(y: i64, t: Complex64, m: u64) -> Complex64 {
    assert!(m >= 1);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let ang = 2.0 * PI * j as f64 / m as f64;
        let phase = Complex64::new(0.0, ang * y.rem_euclid(m as i64) as f64).exp();
        sum += (t * ang.cos()).exp() * phase;
    }
    sum / m as f64
}

// ---------------------------------------------------------------------------
// Tail bounds

/// Rigorous majorant `|I_k(t)| <= I_k(|t|) <= (s/2)^k e^{s^2/4} / k!`.
pub fn i_abs_bound(k: u64, s: f64) -> f64 {
    if s == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (k as f64 * (s / 2.0).ln() + s * s / 4.0 - ln_factorial(k)).exp()
}

/// Upper bound for `2 * sum_{k > r} I_k(s)` (both signs of the order), valid
/// when the geometric ratio `s / (2(r+2))` is below 1.
pub fn i_tail_bound(r: u64, s: f64) -> f64 {
    let q = s / (2.0 * (r + 2) as f64);
    if q >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * i_abs_bound(r + 1, s) / (1.0 - q)
}

/// Upper bound for `sum_{|k| > r} e^{-s} I_k(s)` via the decay estimate
/// `sqrt(s) e^{-s} I_k(s) <= (1 + k/s)^{-k/2}`.
pub fn scaled_tail_bound(r: u64, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let g = |k: f64| (-0.5 * k * (1.0 + k / s).ln()).exp();
    let rho = (-0.5 * (1.0 + (r + 1) as f64 / s).ln()).exp();
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    2.0 * g((r + 1) as f64) / ((1.0 - rho) * s.sqrt())
}

/// Smallest radius whose [`scaled_tail_bound`] is below `tol`.
pub fn scaled_radius(s: f64, tol: f64) -> u64 {
    let mut r = (s.sqrt().max(1.0)) as u64;
    while scaled_tail_bound(r, s) >= tol {
        r = r * 2 + 1;
        if r > 1 << 40 {
            break;
        }
    }
    // shrink back down
    let mut lo = 0u64;
    let mut hi = r;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if scaled_tail_bound(mid, s) < tol {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn ln_factorial(k: u64) -> f64 {
    // exact summation; orders stay at desk scale
    (1..=k).map(|j| (j as f64).ln()).sum()
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature on [0, pi]

fn glq(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    type Rule = Arc<(Vec<f64>, Vec<f64>)>;
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(gauss_legendre(n))).clone()
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre polynomial.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

const PANEL_NODES: usize = 32;

/// Composite rule: `[0, pi]` split into `n / 32` equal panels, 32-node
/// Gauss-Legendre on each. Cost is linear in `n`.
fn quad_0_pi(f: &dyn Fn(f64) -> f64, n: usize) -> f64 {
    let rule = glq(PANEL_NODES);
    let panels = (n / PANEL_NODES).max(1);
    let width = PI / panels as f64;
    let half = width / 2.0;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        let s: f64 = rule
            .0
            .iter()
            .zip(rule.1.iter())
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        total += s * half;
    }
    total
}

fn quad_0_pi_c(f: &dyn Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let rule = glq(PANEL_NODES);
    let panels = (n / PANEL_NODES).max(1);
    let width = PI / panels as f64;
    let half = width / 2.0;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        let s: Complex64 = rule
            .0
            .iter()
            .zip(rule.1.iter())
            .map(|(&x, &w)| f(mid + half * x) * w)
            .sum();
        total += s * half;
    }
    total
}
