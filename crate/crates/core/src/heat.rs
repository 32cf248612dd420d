//! Semidiscrete heat equation on a lattice `Lambda = Z^n B`: the graph
//! Laplacian, the explicit Bessel-product heat kernel, convolution solutions
//! with a rigorous tail bound, an independent Runge-Kutta oracle, the
//! code-initial-condition solution, and the eta heat probe.
//!
//! The Laplacian is normalized as `(1/2n) sum_{y ~ x} (f(y) - f(x))`; the
//! operator `n * Delta` appears only in the plane-wave eigenfunction check.
//! States live in index coordinates `k` (the lattice point is `k B`), which
//! is exact and makes the dynamics identical for every basis.

use num_complex::Complex64;
use num_integer::Integer;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::characters::DirichletCharacter;
use crate::codes::LinearCode;
use crate::exact::Rat;
use crate::lattice::Lattice;
use crate::special::{bessel_i_scaled, scaled_radius, scaled_tail_bound};
use crate::theta::dedekind_eta;
use crate::{Error, Result};

/// Solution values on a centered index-space box of the lattice.
#[derive(Debug, Clone)]
pub struct HeatState {
    pub lattice: Lattice,
    pub radius: i64,
    pub time: f64,
    values: HashMap<Vec<i64>, f64>,
}

impl HeatState {
    pub fn value(&self, k: &[i64]) -> Result<f64> {
        self.values
            .get(k)
            .copied()
            .ok_or_else(|| Error::OutOfWindow(format!("{k:?} outside radius {}", self.radius)))
    }

    pub fn window(&self) -> impl Iterator<Item = (&Vec<i64>, &f64)> {
        self.values.iter()
    }

    fn from_fn(lattice: Lattice, radius: i64, time: f64, f: impl Fn(&[i64]) -> f64) -> Self {
        let n = lattice.dimension();
        let mut values = HashMap::new();
        for_each_box_point(n, radius, |k| {
            values.insert(k.to_vec(), f(k));
        });
        HeatState {
            lattice,
            radius,
            time,
            values,
        }
    }
}

fn for_each_box_point(n: usize, radius: i64, mut f: impl FnMut(&[i64])) {
    let mut k = vec![-radius; n];
    'outer: loop {
        f(&k);
        for j in (0..n).rev() {
            k[j] += 1;
            if k[j] <= radius {
                continue 'outer;
            }
            k[j] = -radius;
        }
        break;
    }
}

/// `(1/2n) sum_j (f(x + b_j) + f(x - b_j) - 2 f(x))` at the index point `k`;
/// `k` and all 2n neighbors must be inside the window.
pub fn laplacian_apply(state: &HeatState, k: &[i64]) -> Result<f64> {
    let n = state.lattice.dimension();
    let center = state.value(k)?;
    let mut acc = 0.0;
    let mut kk = k.to_vec();
    for j in 0..n {
        kk[j] += 1;
        acc += state.value(&kk)?;
        kk[j] -= 2;
        acc += state.value(&kk)?;
        kk[j] += 1;
        acc -= 2.0 * center;
    }
    Ok(acc / (2.0 * n as f64))
}

/// Heat kernel in index coordinates: `prod_j e^{-t/n} I_{k_j}(t/n)`.
pub fn heat_kernel_index(n: usize, k: &[i64], t: f64) -> f64 {
    assert!(t >= 0.0);
    assert_eq!(k.len(), n);
    k.iter()
        .map(|&kj| bessel_i_scaled(kj, t / n as f64))
        .product()
}

/// Heat kernel `K_{Lambda,t}(y) = e^{-t} prod_j I_{(y B^{-1})_j}(t/n)` at a
/// lattice point given in ambient coordinates.
pub fn heat_kernel(lat: &Lattice, y: &[Rat], t: f64) -> Result<f64> {
    let n = lat.dimension();
    assert_eq!(y.len(), n);
    let idx = lat.basis_inverse().row_vec_mul(y);
    if !idx.iter().all(|c| c.is_integer()) {
        return Err(Error::NotLatticePoint);
    }
    let k: Vec<i64> = idx
        .iter()
        .map(|c| i64::try_from(c.to_integer()).expect("index fits i64"))
        .collect();
    Ok(heat_kernel_index(n, &k, t))
}

/// Index-space radius such that the kernel mass outside the box is below
/// `tol`, with the bound itself.
pub fn kernel_window(n: usize, t: f64, tol: f64) -> (i64, f64) {
    let s = t / n as f64;
    let mut r = scaled_radius(s, tol / (2.0 * n as f64)) as i64;
    loop {
        // each coordinate contributes full mass <= 1, so a per-coordinate
        // union bound controls the n-dimensional tail
        let tail = n as f64 * scaled_tail_bound(r as u64, s);
        if tail < tol || r > 4_000_000 {
            return (r, tail);
        }
        r += 1;
    }
}

/// Initial data for the heat equation, defined on all of the index lattice.
#[derive(Debug, Clone)]
pub enum InitialData {
    /// Kronecker delta at the origin.
    Delta,
    /// Constant one.
    Ones,
    /// Characteristic function of `rho^{-1}(C)` (periodic with period m).
    CosetIndicator(LinearCode),
    /// Finite table on a centered box, zero outside.
    Table { radius: i64, values: HashMap<Vec<i64>, f64> },
}

impl InitialData {
    pub fn eval(&self, k: &[i64]) -> f64 {
        match self {
            InitialData::Delta => {
                if k.iter().all(|&v| v == 0) {
                    1.0
                } else {
                    0.0
                }
            }
            InitialData::Ones => 1.0,
            InitialData::CosetIndicator(code) => {
                let m = code.modulus() as i64;
                let word: Vec<u64> = k.iter().map(|&v| v.rem_euclid(m) as u64).collect();
                if code.contains_word(&word) {
                    1.0
                } else {
                    0.0
                }
            }
            InitialData::Table { values, .. } => values.get(k).copied().unwrap_or(0.0),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            InitialData::Table { values, .. } => {
                values.values().fold(0.0f64, |a, &v| a.max(v.abs()))
            }
            _ => 1.0,
        }
    }

    /// Period of the data when it is periodic (for the exact one-period
    /// oracle).
    fn period(&self) -> Option<i64> {
        match self {
            InitialData::Ones => Some(1),
            InitialData::CosetIndicator(code) => Some(code.modulus() as i64),
            _ => None,
        }
    }
}

/// Convolution solution `u(x, t) = sum_y u_0(x - y) K_{Lambda,t}(y)` on the
/// box of the given radius; truncation error is at most
/// `sup|u_0| * kernel tail mass`.
pub fn heat_solve_convolution(
    lat: &Lattice,
    u0: &InitialData,
    t: f64,
    query_radius: i64,
) -> Result<HeatState> {
    let n = lat.dimension();
    let (kr, tail) = kernel_window(n, t, 1e-10);
    if tail >= 1.0 {
        return Err(Error::TruncationFailure {
            cap: kr,
            tail_bound: tail,
        });
    }
    // per-coordinate kernel factors
    let s = t / n as f64;
    let factors: Vec<f64> = (0..=kr).map(|k| bessel_i_scaled(k, s)).collect();
    let mut state = HeatState::from_fn(lat.clone(), query_radius, t, |_| 0.0);
    let mut out: HashMap<Vec<i64>, f64> = HashMap::new();
    for_each_box_point(n, query_radius, |x| {
        let mut acc = 0.0;
        for_each_box_point(n, kr, |y| {
            let shifted: Vec<i64> = (0..n).map(|j| x[j] - y[j]).collect();
            let w = u0.eval(&shifted);
            if w != 0.0 {
                let kernel: f64 = y.iter().map(|&yj| factors[yj.unsigned_abs() as usize]).product();
                acc += w * kernel;
            }
        });
        out.insert(x.to_vec(), acc);
    });
    state.values = out;
    Ok(state)
}

/// Classical fourth-order Runge-Kutta integration of `du/dt = Delta u`,
/// independent of the Bessel kernel formula.
///
/// Periodic initial data (constants, code cosets) are integrated exactly on
/// one period with wrap-around neighbors; other data use a zero boundary on
/// the truncated box.
pub fn heat_solve_ode_oracle(
    lat: &Lattice,
    u0: &InitialData,
    t_final: f64,
    box_radius: i64,
    step: f64,
) -> Result<HeatState> {
    assert!(step > 0.0 && t_final >= 0.0);
    if step > 1.0 {
        return Err(Error::StepTooLarge { step, bound: 1.0 });
    }
    let n = lat.dimension();
    match u0.period() {
        Some(period) => {
            // quotient dynamics on (Z/period)^n: finite and boundary-free
            let len = (period as usize).pow(n as u32);
            let strides: Vec<usize> = (0..n)
                .map(|j| (period as usize).pow((n - 1 - j) as u32))
                .collect();
            let decode = |mut i: usize| -> Vec<i64> {
                let mut k = vec![0i64; n];
                for j in 0..n {
                    k[j] = (i / strides[j]) as i64;
                    i %= strides[j];
                }
                k
            };
            let mut u: Vec<f64> = (0..len).map(|i| u0.eval(&decode(i))).collect();
            let lap = |u: &[f64]| -> Vec<f64> {
                (0..len)
                    .map(|i| {
                        let k = decode(i);
                        let mut acc = -2.0 * n as f64 * u[i];
                        for j in 0..n {
                            for d in [-1i64, 1] {
                                let mut kk = k.clone();
                                kk[j] = (kk[j] + d).rem_euclid(period);
                                let idx: usize = (0..n)
                                    .map(|jj| kk[jj] as usize * strides[jj])
                                    .sum();
                                acc += u[idx];
                            }
                        }
                        acc / (2.0 * n as f64)
                    })
                    .collect()
            };
            rk4(&mut u, t_final, step, lap);
            let state = HeatState::from_fn(lat.clone(), box_radius, t_final, |k| {
                let idx: usize = (0..n)
                    .map(|j| k[j].rem_euclid(period) as usize * strides[j])
                    .sum();
                u[idx]
            });
            Ok(state)
        }
        None => {
            let side = (2 * box_radius + 1) as usize;
            let len = side.pow(n as u32);
            let strides: Vec<usize> = (0..n).map(|j| side.pow((n - 1 - j) as u32)).collect();
            let decode = |mut i: usize| -> Vec<i64> {
                let mut k = vec![0i64; n];
                for j in 0..n {
                    k[j] = (i / strides[j]) as i64 - box_radius;
                    i %= strides[j];
                }
                k
            };
            let mut u: Vec<f64> = (0..len).map(|i| u0.eval(&decode(i))).collect();
            let lap = |u: &[f64]| -> Vec<f64> {
                (0..len)
                    .map(|i| {
                        let k = decode(i);
                        let mut acc = -2.0 * n as f64 * u[i];
                        for j in 0..n {
                            for d in [-1i64, 1] {
                                let kj = k[j] + d;
                                if kj.abs() <= box_radius {
                                    acc += u[(i as i64 + d * strides[j] as i64) as usize];
                                }
                                // zero outside the box
                            }
                        }
                        acc / (2.0 * n as f64)
                    })
                    .collect()
            };
            rk4(&mut u, t_final, step, lap);
            let state = HeatState::from_fn(lat.clone(), box_radius, t_final, |k| {
                let idx: usize = (0..n)
                    .map(|j| (k[j] + box_radius) as usize * strides[j])
                    .sum();
                u[idx]
            });
            Ok(state)
        }
    }
}

fn rk4(u: &mut [f64], t_final: f64, step: f64, rhs: impl Fn(&[f64]) -> Vec<f64>) {
    let steps = (t_final / step).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(u);
        let u2: Vec<f64> = u.iter().zip(&k1).map(|(a, b)| a + 0.5 * h * b).collect();
        let k2 = rhs(&u2);
        let u3: Vec<f64> = u.iter().zip(&k2).map(|(a, b)| a + 0.5 * h * b).collect();
        let k3 = rhs(&u3);
        let u4: Vec<f64> = u.iter().zip(&k3).map(|(a, b)| a + h * b).collect();
        let k4 = rhs(&u4);
        for i in 0..u.len() {
            u[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// Solution of the heat equation on `Z^n` with initial condition
/// `1_{rho^{-1}(C)}`:
/// `u(x,t) = e^{-t} (#C / m^n) sum_{c in Cperp} prod_j e^{(t/n) cos(2 pi c_j / m)}
/// e^{2 pi i x_j c_j / m}`.
pub fn code_heat_solution(code: &LinearCode, x: &[i64], t: f64) -> Result<f64> {
    let n = code.length();
    let m = code.modulus();
    assert_eq!(x.len(), n);
    let dual = crate::codes::dual_code(code)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for c in dual.codewords() {
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..n {
            let ang = 2.0 * PI * c[j] as f64 / m as f64;
            prod *= (t / n as f64 * ang.cos()).exp()
                * Complex64::new(0.0, ang * x[j] as f64).exp();
        }
        sum += prod;
    }
    let scale = (-t).exp() * code.size() as f64 / (m as f64).powi(n as i32);
    let value = sum * scale;
    assert!(
        value.im.abs() < 1e-12,
        "solution must be real, got imaginary part {}",
        value.im
    );
    // for x in the preimage lattice the cwe form must agree
    let word: Vec<u64> = x.iter().map(|&v| v.rem_euclid(m as i64) as u64).collect();
    if code.contains_word(&word) {
        let values: Vec<Complex64> = (0..m)
            .map(|l| {
                let ang = 2.0 * PI * l as f64 / m as f64;
                Complex64::new((t / n as f64 * ang.cos()).exp(), 0.0)
            })
            .collect();
        let cwe_form = dual.cwe().evaluate(&values) * scale;
        assert!(
            (value - cwe_form).norm() < 1e-10,
            "cwe form disagrees: {} vs {}",
            value.re,
            cwe_form.re
        );
    }
    Ok(value.re)
}

/// The eta heat probe `L chi_12(L) (psi_{12,L} * K_{Z, 6 L^2 t})(0)` with
/// `psi_{12,L} = chi_12 1_{LZ}`; converges to `(1/sqrt 3) eta(i pi t)` as
/// `L` grows through integers coprime to 12.
pub fn eta_heat_probe(l: u64, t: f64) -> Result<f64> {
    if l.gcd(&12) != 1 {
        return Err(Error::NotCoprime(l));
    }
    assert!(t > 0.0);
    let chi = DirichletCharacter::kronecker(12).expect("kronecker mod 12 exists");
    let s = 6.0 * (l * l) as f64 * t;
    let radius = (scaled_radius(s, 1e-14) as i64 / l as i64) + 2;
    let mut sum = 0.0;
    for k in -radius..=radius {
        let c = chi.eval(l as i64 * k).re;
        if c != 0.0 {
            sum += c * bessel_i_scaled(l as i64 * k, s);
        }
    }
    Ok(chi.eval(l as i64).re * l as f64 * sum)
}

/// The limit value of the probe: `(1/sqrt 3) eta(i pi t)`.
pub fn eta_heat_limit(t: f64) -> f64 {
    let (route_a, _) = dedekind_eta(Complex64::new(0.0, PI * t));
    route_a.complex().re / 3.0f64.sqrt()
}
