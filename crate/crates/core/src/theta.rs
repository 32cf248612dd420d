//! Theta functions of lattices, the character-twisted theta identity obtained
//! as the continuum limit of the Bessel-sum identity, the Dedekind eta
//! function with its functional equation, and the Jacobi theta-2/theta-4
//! inversion check.
//!
//! Every series value carries a rigorous tail bound from Gaussian decay.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::characters::{DirichletCharacter, DirichletCharacterFamily};
use crate::exact::{rat_to_f64, Rat, RatMat};
use crate::lattice::Lattice;
use crate::lattice_sums::CosetIndex;
use crate::report::{IdentityReport, ThetaValue};
use crate::special::{bessel_i_scaled, scaled_radius};
use crate::{Error, Result};

/// Principal-branch square root with `arg` in `(-pi, pi]`; every branch
/// decision in this module routes through here.
pub fn sqrt_principal(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// Shell count of the sup-norm sphere `max_j |x_j| = r` in `Z^n`.
fn shell_count(r: i64, n: usize) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let big = (2 * r + 1) as f64;
    let small = (2 * r - 1) as f64;
    big.powi(n as i32) - small.powi(n as i32)
}

/// Smallest box radius `R` with `sum_{r > R} shell(r) e^{-c r^2} < tol`,
/// plus that tail value. Valid whenever the summand is bounded by
/// `e^{-c ||x||_inf^2}`.
fn gaussian_box_radius(c: f64, n: usize, tol: f64) -> (i64, f64) {
    let tail_from = |r0: i64| -> f64 {
        let mut tail = 0.0;
        for r in r0.. {
            let term = shell_count(r, n) * (-c * (r * r) as f64).exp();
            tail += term;
            if term < 1e-3 * tail * f64::EPSILON || r > r0 + 400 {
                break;
            }
        }
        tail
    };
    let mut r: i64 = 1;
    loop {
        let tail = tail_from(r + 1);
        if tail < tol || r > 10_000 {
            return (r, tail);
        }
        r += 1;
    }
}

/// Lower bound on the smallest eigenvalue of the Gram matrix, via
/// `det(G) / lambda_max^{n-1}` with a Gershgorin bound on `lambda_max`.
fn gram_min_eigenvalue_bound(lat: &Lattice) -> f64 {
    let n = lat.dimension();
    let g = lat.gram();
    let lambda_max = (0..n)
        .map(|i| (0..n).map(|j| rat_to_f64(&g.rows[i][j]).abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let det: f64 = {
        let cov = rat_to_f64(&lat.covolume());
        cov * cov
    };
    det / lambda_max.powi(n as i32 - 1)
}

fn theta_lattice_with_radius(lat: &Lattice, t: f64, radius: i64) -> (Complex64, u64) {
    let n = lat.dimension();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rat_to_f64(&lat.gram().rows[i][j])).collect())
        .collect();
    let mut sum = 0.0f64;
    let mut terms = 0u64;
    let mut x = vec![-radius; n];
    'outer: loop {
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += x[i] as f64 * g[i][j] * x[j] as f64;
            }
        }
        sum += (-4.0 * PI * PI * quad * t).exp();
        terms += 1;
        for j in (0..n).rev() {
            x[j] += 1;
            if x[j] <= radius {
                continue 'outer;
            }
            x[j] = -radius;
        }
        break;
    }
    (Complex64::new(sum, 0.0), terms)
}

/// Theta function of the lattice: `sum_{gamma in Gamma} e^{-4 pi^2 <gamma,gamma> t}`.
pub fn theta_lattice(lat: &Lattice, t: f64) -> ThetaValue {
    assert!(t > 0.0, "theta_lattice requires t > 0");
    let c = 4.0 * PI * PI * t * gram_min_eigenvalue_bound(lat);
    let (radius, tail) = gaussian_box_radius(c, lat.dimension(), 1e-14);
    let (value, terms) = theta_lattice_with_radius(lat, t, radius);
    ThetaValue::new(value, terms, tail)
}

/// Both sides of the character-twisted theta identity (the continuum limit of
/// the Bessel-sum identity), each as an independently truncated Gaussian
/// series.
pub fn theta_char_sides(
    lat: &Lattice,
    fam: &DirichletCharacterFamily,
    x: &[i64],
    y: &[Rat],
    t: &[f64],
) -> Result<IdentityReport> {
    let n = lat.dimension();
    if x.len() != n || y.len() != n || t.len() != n || fam.dimension() != n {
        return Err(Error::DimensionMismatch {
            got: fam.dimension(),
            expected: n,
        });
    }
    assert!(t.iter().all(|&tj| tj > 0.0), "t_j must be positive");
    let index = CosetIndex::new(lat, fam.modulus())?;
    let yf: Vec<f64> = y.iter().map(rat_to_f64).collect();

    // Gaussian side over integer orders a in x + Z^n (A/q)
    let full: Vec<f64> = t
        .iter()
        .map(|&tj| {
            let mut s = 1.0;
            let mut a = 1;
            loop {
                let term = 2.0 * (-(a * a) as f64 / (2.0 * tj)).exp();
                s += term;
                if term < 1e-18 * s {
                    break;
                }
                a += 1;
            }
            s
        })
        .collect();
    let coord_tail = |r: i64, tj: f64| -> f64 {
        let mut tail = 0.0;
        for a in (r + 1)..(r + 400) {
            tail += 2.0 * (-(a * a) as f64 / (2.0 * tj)).exp();
        }
        tail
    };
    let mut radius: i64 = 1;
    let mut tail;
    loop {
        tail = (0..n)
            .map(|j| {
                coord_tail(radius, t[j])
                    * (0..n).filter(|&i| i != j).map(|i| full[i]).product::<f64>()
            })
            .sum::<f64>();
        if tail < 1e-13 || radius > 10_000 {
            break;
        }
        radius += 1;
    }
    let norm = (2.0 * PI).powf(-(n as f64) / 2.0);
    let reach = radius + x.iter().map(|v| v.abs()).max().unwrap_or(0);
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut a = vec![-reach; n];
    'lhs: loop {
        if let Some(k) = index.character_index(&a, x) {
            let chi = fam.eval(&k)?;
            if chi.norm() != 0.0 {
                let quad: f64 = (0..n).map(|j| (a[j] * a[j]) as f64 / (2.0 * t[j])).sum();
                let dot: f64 = (0..n).map(|j| yf[j] * a[j] as f64).sum();
                lhs += chi * (-quad).exp() * Complex64::new(0.0, 2.0 * PI * dot).exp();
            }
        }
        for j in (0..n).rev() {
            a[j] += 1;
            if a[j] <= reach {
                continue 'lhs;
            }
            a[j] = -reach;
        }
        break;
    }
    lhs *= norm;

    // dual side: Gaussian decay in gamma* = m tA^{-1}
    let inv_t: RatMat = lat.basis_inverse().transpose();
    let invf: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| rat_to_f64(&inv_t.rows[i][j])).collect())
        .collect();
    let a_max = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| rat_to_f64(&lat.basis().rows[i][j]).abs())
        .fold(0.0f64, f64::max);
    let t_min = t.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_max = yf.iter().map(|v| v.abs()).fold(0.0f64, f64::max);
    // ||m||_inf = r forces ||gamma*||_inf >= r / (n a_max)
    let reach_of = |r: i64| (r as f64 / (n as f64 * a_max) - y_max).max(0.0);
    let mut m_radius: i64 = 1;
    loop {
        let mut shell_tail = 0.0;
        for r in (m_radius + 1)..(m_radius + 600) {
            let d = reach_of(r);
            shell_tail += shell_count(r, n) * (-2.0 * PI * PI * t_min * d * d).exp();
        }
        if shell_tail < 1e-15 || m_radius > 20_000 {
            break;
        }
        m_radius += 1;
    }
    let conj = fam.conj();
    let sqrt_t: f64 = t.iter().map(|&tj| tj.sqrt()).product();
    let prefactor = fam.gauss_sum_product() / rat_to_f64(&lat.covolume()) * sqrt_t;
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut m = vec![-m_radius; n];
    'rhs: loop {
        let chi = conj.eval(&m)?;
        if chi.norm() != 0.0 {
            let gamma: Vec<f64> = (0..n)
                .map(|j| (0..n).map(|i| m[i] as f64 * invf[i][j]).sum())
                .collect();
            let quad: f64 = (0..n)
                .map(|j| (yf[j] - gamma[j]).powi(2) * t[j])
                .sum();
            let dot: f64 = (0..n).map(|j| x[j] as f64 * gamma[j]).sum();
            rhs += chi
                * (-2.0 * PI * PI * quad).exp()
                * Complex64::new(0.0, 2.0 * PI * dot).exp();
        }
        for j in (0..n).rev() {
            m[j] += 1;
            if m[j] <= m_radius {
                continue 'rhs;
            }
            m[j] = -m_radius;
        }
        break;
    }
    rhs *= prefactor;

    Ok(IdentityReport::new(lhs, rhs, radius, tail * norm))
}

/// Continuum-limit schedule: the rescaled Bessel identity evaluated along an
/// increasing list of scale factors `L`.
pub struct ContinuumLimitSchedule {
    pub l_values: Vec<u64>,
    pub lattice: Lattice,
    pub family: DirichletCharacterFamily,
    pub x: Vec<i64>,
    pub y: Vec<Rat>,
    pub t: Vec<f64>,
}

/// One row of the probe: both sides at scale `L` plus the distance of the
/// Bessel side to the theta-identity limit value.
pub struct ContinuumLimitRow {
    pub l: u64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub identity_residual: f64,
    pub limit_residual: f64,
}

/// Evaluates the rescaled identity at each `L` and the distance of its Bessel
/// side to the limiting theta value; residuals should decay along the
/// schedule.
pub fn continuum_limit_probe(schedule: &ContinuumLimitSchedule) -> Result<Vec<ContinuumLimitRow>> {
    let s = schedule;
    assert!(
        s.l_values.windows(2).all(|w| w[0] < w[1]) && s.l_values.iter().all(|&l| l >= 1),
        "L values must be strictly increasing and >= 1"
    );
    let lat = &s.lattice;
    let n = lat.dimension();
    assert!(s.t.iter().all(|&tj| tj > 0.0), "t_j must be positive");
    let index = CosetIndex::new(lat, s.family.modulus())?;
    let yf: Vec<f64> = s.y.iter().map(rat_to_f64).collect();
    let limit = theta_char_sides(lat, &s.family, &s.x, &s.y, &s.t)?.rhs_value();

    let mut rows = Vec::with_capacity(s.l_values.len());
    for &l in &s.l_values {
        let lf = l as f64;
        // Bessel side: orders a_j L with argument L^2 t_j
        let radius = s
            .t
            .iter()
            .map(|&tj| {
                let order_radius = scaled_radius(lf * lf * tj, 1e-14);
                (order_radius as f64 / lf).ceil() as i64
            })
            .max()
            .unwrap_or(1)
            + s.x.iter().map(|v| v.abs()).max().unwrap_or(0);
        let scale: f64 = s.t.iter().map(|&tj| lf * tj.sqrt()).product();
        let mut lhs = Complex64::new(0.0, 0.0);
        let mut a = vec![-radius; n];
        'lhs: loop {
            if let Some(k) = index.character_index(&a, &s.x) {
                let chi = s.family.eval(&k)?;
                if chi.norm() != 0.0 {
                    let mut prod = 1.0f64;
                    for j in 0..n {
                        prod *= bessel_i_scaled(a[j] * l as i64, lf * lf * s.t[j]);
                    }
                    let dot: f64 = (0..n).map(|j| yf[j] * a[j] as f64).sum();
                    lhs += chi * prod * Complex64::new(0.0, 2.0 * PI * dot).exp();
                }
            }
            for j in (0..n).rev() {
                a[j] += 1;
                if a[j] <= radius {
                    continue 'lhs;
                }
                a[j] = -radius;
            }
            break;
        }
        lhs *= scale;

        // dual side: window scaled to [-L/2, L/2], boundary handled exactly
        // through the dual box of the L-scaled lattice
        let scaled_lat = {
            let lrat = crate::exact::rat_int(l as i64);
            let rows: Vec<Vec<Rat>> = (0..n)
                .map(|i| (0..n).map(|j| &lat.basis().rows[i][j] * &lrat).collect())
                .collect();
            Lattice::new(RatMat::new(rows))?
        };
        let y_over_l: Vec<Rat> = s
            .y
            .iter()
            .map(|yj| yj / crate::exact::rat_int(l as i64))
            .collect();
        let points = scaled_lat.dual_points_in_shifted_box(&y_over_l)?;
        let conj = s.family.conj();
        let sqrt_t: f64 = s.t.iter().map(|&tj| tj.sqrt()).product();
        let prefactor = s.family.gauss_sum_product() / rat_to_f64(&lat.covolume()) * sqrt_t;
        let mut rhs = Complex64::new(0.0, 0.0);
        for p in &points {
            let m: Vec<i64> = p
                .integer_preimage
                .iter()
                .map(|v| i64::try_from(v).expect("preimage fits i64"))
                .collect();
            let chi = conj.eval(&m)?;
            if chi.norm() == 0.0 {
                continue;
            }
            // gamma* = L * (dual point of the scaled lattice)
            let gamma: Vec<f64> = p.coordinates.iter().map(|c| lf * rat_to_f64(c)).collect();
            let mut term = chi * rat_to_f64(&p.weight);
            for j in 0..n {
                let theta = 2.0 * PI * (yf[j] - gamma[j]) / lf;
                term *= (lf * lf * s.t[j] * (theta.cos() - 1.0)).exp();
            }
            let dot: f64 = (0..n).map(|j| s.x[j] as f64 * gamma[j]).sum();
            term *= Complex64::new(0.0, 2.0 * PI * dot).exp();
            rhs += term;
        }
        rhs *= prefactor;

        rows.push(ContinuumLimitRow {
            l,
            lhs,
            rhs,
            identity_residual: (lhs - rhs).norm(),
            limit_residual: (lhs - limit).norm(),
        });
    }
    Ok(rows)
}

/// Dedekind eta by two independent routes: the quadratic-character q-series
/// and the infinite product `q^{1/24} prod (1 - q^n)`.
pub fn dedekind_eta(tau: Complex64) -> (ThetaValue, ThetaValue) {
    assert!(tau.im > 0.0, "eta requires Im tau > 0");
    let chi12 = DirichletCharacter::kronecker(12).expect("kronecker mod 12 exists");
    let r = (-2.0 * PI * tau.im / 24.0).exp(); // |q|^{1/24}

    // route A: (1/2) sum_n (12/n) q^{n^2/24}
    let mut series = Complex64::new(0.0, 0.0);
    let mut n: i64 = 1;
    let mut terms = 0u64;
    loop {
        let c = chi12.eval(n);
        if c.norm() != 0.0 {
            let e = (Complex64::new(0.0, 2.0 * PI) * tau * ((n * n) as f64 / 24.0)).exp();
            series += c * e * 2.0; // n and -n contribute equally
            terms += 2;
        }
        if r.powi((n * n) as i32) < 1e-18 {
            break;
        }
        n += 1;
    }
    let q_tail = r.powi(((n + 1) * (n + 1)) as i32);
    let tail_a = q_tail / (1.0 - r.powi((2 * n + 3) as i32));
    let route_a = ThetaValue::new(series * 0.5, terms, tail_a);

    // route B: q^{1/24} prod_{n >= 1} (1 - q^n)
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut prod = (Complex64::new(0.0, 2.0 * PI) * tau / 24.0).exp();
    let mut qn = q;
    let mut terms_b = 1u64;
    while qn.norm() > 1e-18 {
        prod *= 1.0 - qn;
        qn *= q;
        terms_b += 1;
    }
    let rho = qn.norm() / (1.0 - q.norm());
    let tail_b = prod.norm() * 2.0 * rho;
    (route_a, ThetaValue::new(prod, terms_b, tail_b))
}

/// Jacobi theta-2 `sum_n e^{pi i tau (n + 1/2)^2} e^{(2n+1) pi i v}`.
pub fn vartheta2(v: Complex64, tau: Complex64) -> Complex64 {
    assert!(tau.im > 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut n: i64 = 0;
    loop {
        let mut shell = Complex64::new(0.0, 0.0);
        for m in [n, -n - 1] {
            let h = m as f64 + 0.5;
            shell += (Complex64::new(0.0, PI) * (tau * h * h + v * (2.0 * h))).exp();
        }
        sum += shell;
        if shell.norm() < 1e-18 * sum.norm().max(1.0) && n > 2 {
            return sum;
        }
        n += 1;
    }
}

/// Jacobi theta-4 `sum_n (-1)^n e^{pi i tau n^2} e^{2 pi i n v}`.
pub fn vartheta4(v: Complex64, tau: Complex64) -> Complex64 {
    assert!(tau.im > 0.0);
    let mut sum = Complex64::new(1.0, 0.0);
    let mut n: i64 = 1;
    loop {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let base = (Complex64::new(0.0, PI) * tau * ((n * n) as f64)).exp();
        let shell = sign
            * base
            * ((Complex64::new(0.0, 2.0 * PI) * v * n as f64).exp()
                + (Complex64::new(0.0, -2.0 * PI) * v * n as f64).exp());
        sum += shell;
        if shell.norm() < 1e-18 * sum.norm().max(1.0) && n > 2 {
            return sum;
        }
        n += 1;
    }
}

/// Two-route check of the odd-Gaussian inversion identity, cross-validated
/// against the theta-2 / theta-4 form at `tau = i pi t`.
pub fn jacobi_theta_identity_check(t: f64) -> IdentityReport {
    assert!(t > 0.0);
    // lhs: (1 / sqrt(4 pi t)) sum_k e^{-(2k+1)^2 / 4t}
    let mut lhs = 0.0f64;
    let mut k: i64 = 0;
    let mut radius;
    loop {
        let term = 2.0 * (-((2 * k + 1) * (2 * k + 1)) as f64 / (4.0 * t)).exp();
        lhs += term;
        radius = k;
        if term < 1e-18 * lhs.max(1e-300) && k > 2 {
            break;
        }
        k += 1;
    }
    lhs /= (4.0 * PI * t).sqrt();
    // rhs: (1/2) sum_j (-1)^j e^{-pi^2 j^2 t}
    let mut rhs = 1.0f64;
    let mut j: i64 = 1;
    loop {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = 2.0 * sign * (-PI * PI * (j * j) as f64 * t).exp();
        rhs += term;
        if term.abs() < 1e-18 && j > 2 {
            break;
        }
        j += 1;
    }
    rhs *= 0.5;

    // theta-form cross-check at tau = i pi t
    let tau = Complex64::new(0.0, PI * t);
    let zero = Complex64::new(0.0, 0.0);
    let theta_lhs =
        0.5 * sqrt_principal(Complex64::new(0.0, 1.0) / tau) * vartheta2(zero, -1.0 / tau);
    let theta_rhs = 0.5 * vartheta4(zero, tau);
    let residual_theta = (theta_lhs - theta_rhs).norm();
    let lhs_c = Complex64::new(lhs, 0.0);
    let rhs_c = Complex64::new(rhs, 0.0);
    let mut report = IdentityReport::new(lhs_c, rhs_c, radius, 1e-16);
    if residual_theta > report.abs_residual {
        report.abs_residual = residual_theta;
    }
    report
}
