//! Both sides of the character-twisted Bessel lattice-sum identity, computed
//! by independent routes: a truncated sum of I-Bessel products over the
//! lattice on one side, a finite weighted sum over dual points in the unit
//! box on the other. The discrete-torus specialization lives here too.
//!
//! Truncation of the infinite side always reports a rigorous tail bound; the
//! identity "passes" iff the residual is below tolerance plus that bound.

use num_complex::Complex64;
use num_traits::Signed;
use std::f64::consts::PI;

use crate::characters::DirichletCharacterFamily;
use crate::exact::{rat_to_f64, Rat, RatMat};
use crate::lattice::Lattice;
use crate::report::IdentityReport;
use crate::special::{bessel_i_int, i_tail_bound, BesselEvalConfig};
use crate::{Error, Result};

/// Cap on the truncation radius of the Bessel side.
const RADIUS_CAP: i64 = 2000;

/// Smallest box radius `R` such that the dropped part of
/// `sum_{a in Z^n} prod_j I_{|a_j|}(s_j)` outside `max_j |a_j| <= R` is
/// provably below `tol`. Returns the radius and the bound.
pub fn product_tail_radius(s: &[f64], tol: f64) -> Result<(i64, f64)> {
    let full: Vec<f64> = s.iter().map(|&sj| sj.exp()).collect();
    let mut r: i64 = 2;
    loop {
        let bound: f64 = (0..s.len())
            .map(|j| {
                let t = i_tail_bound(r as u64, s[j]);
                let others: f64 = (0..s.len()).filter(|&i| i != j).map(|i| full[i]).product();
                t * others
            })
            .sum();
        if bound < tol {
            return Ok((r, bound));
        }
        if r >= RADIUS_CAP {
            return Err(Error::TruncationFailure {
                cap: RADIUS_CAP,
                tail_bound: bound,
            });
        }
        r += 1;
    }
}

/// Exact membership test for the Bessel-order coset `x + Z^n (A/q)`,
/// recovering the character argument `k = (a - x)(A/q)^{-1}`.
pub(crate) struct CosetIndex {
    n: usize,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl CosetIndex {
    pub(crate) fn new(lat: &Lattice, q: u64) -> Result<Self> {
        let n = lat.dimension();
        let a_scaled = scaled_basis(lat, q)?;
        let inv = a_scaled.inverse()?;
        let det = a_scaled.det();
        let adj: Vec<Vec<i128>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = &inv.rows[i][j] * &det;
                        assert!(v.is_integer());
                        i128::try_from(v.to_integer()).expect("adjugate entry fits i128")
                    })
                    .collect()
            })
            .collect();
        let det = i128::try_from(det.to_integer()).expect("determinant fits i128");
        Ok(CosetIndex { n, adj, det })
    }

    /// `Some(k)` iff `a` lies in `x + Z^n (A/q)`.
    pub(crate) fn character_index(&self, a: &[i64], x: &[i64]) -> Option<Vec<i64>> {
        let mut k = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut acc: i128 = 0;
            for i in 0..self.n {
                acc += (a[i] - x[i]) as i128 * self.adj[i][j];
            }
            if acc % self.det != 0 {
                return None;
            }
            k.push((acc / self.det) as i64);
        }
        Some(k)
    }
}

/// Divides the basis by `q`, failing loudly on any non-divisible entry.
fn scaled_basis(lat: &Lattice, q: u64) -> Result<RatMat> {
    let n = lat.dimension();
    let qr = crate::exact::rat_int(q as i64);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v = &lat.basis().rows[i][j] / &qr;
            if !v.is_integer() {
                return Err(Error::DivisibilityViolation { row: i, col: j, q });
            }
            row.push(v);
        }
        rows.push(row);
    }
    Ok(RatMat::new(rows))
}

/// Terms of the truncated Bessel side in lexicographic enumeration order.
///
/// The Bessel orders run over the coset `x + Z^n (A/q)` of integer vectors;
/// the character argument is recovered exactly as `k = (a - x)(A/q)^{-1}`.
fn lhs_terms(
    lat: &Lattice,
    fam: &DirichletCharacterFamily,
    x: &[i64],
    y: &[Rat],
    t: &[Complex64],
    tol: f64,
) -> Result<(Vec<Complex64>, i64, f64)> {
    let n = lat.dimension();
    if x.len() != n || y.len() != n || t.len() != n || fam.dimension() != n {
        return Err(Error::DimensionMismatch {
            got: fam.dimension(),
            expected: n,
        });
    }
    let index = CosetIndex::new(lat, fam.modulus())?;
    let s: Vec<f64> = t.iter().map(|tj| tj.norm()).collect();
    let (radius, tail_bound) = product_tail_radius(&s, tol)?;
    let reach = radius + x.iter().map(|v| v.abs()).max().unwrap_or(0);

    // Bessel tables per coordinate, orders 0..=reach
    let cfg = BesselEvalConfig::default();
    let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for tj in t {
        let mut col = Vec::with_capacity(reach as usize + 1);
        for a in 0..=reach {
            col.push(bessel_i_int(a, *tj, &cfg)?);
        }
        tables.push(col);
    }
    let yf: Vec<f64> = y.iter().map(rat_to_f64).collect();

    let mut terms = Vec::new();
    let mut a = vec![-radius; n];
    'outer: loop {
        if let Some(k) = index.character_index(&a, x) {
            let chi = fam.eval(&k)?;
            if chi.norm() != 0.0 {
                let mut prod = chi;
                for j in 0..n {
                    prod *= tables[j][a[j].unsigned_abs() as usize];
                }
                let dot: f64 = yf.iter().zip(&a).map(|(yj, &aj)| yj * aj as f64).sum();
                prod *= Complex64::new(0.0, 2.0 * PI * dot).exp();
                terms.push(prod);
            }
        }
        // odometer over the box [-radius, radius]^n
        for j in (0..n).rev() {
            a[j] += 1;
            if a[j] <= radius {
                continue 'outer;
            }
            a[j] = -radius;
        }
        break;
    }
    Ok((terms, radius, tail_bound))
}

fn kahan_sum(terms: &[Complex64]) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for &t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

/// The Bessel side: `sum_{g in Gamma} chi(g A^{-1}) prod_j I_{x_j + g_j/q}(t_j)
/// e^{2 pi i <y, x + g/q>}`, truncated with a reported tail bound.
pub fn lhs_bessel_sum(
    lat: &Lattice,
    fam: &DirichletCharacterFamily,
    x: &[i64],
    y: &[Rat],
    t: &[Complex64],
    tol: f64,
) -> Result<(Complex64, i64, f64)> {
    let (terms, radius, bound) = lhs_terms(lat, fam, x, y, t, tol)?;
    Ok((kahan_sum(&terms), radius, bound))
}

/// The dual side: a finite weighted sum over `Gamma*` points in the shifted
/// closed box, with the Gauss-sum prefactor.
pub fn rhs_dual_sum(
    lat: &Lattice,
    fam: &DirichletCharacterFamily,
    x: &[i64],
    y: &[Rat],
    t: &[Complex64],
) -> Result<Complex64> {
    let n = lat.dimension();
    if x.len() != n || y.len() != n || t.len() != n || fam.dimension() != n {
        return Err(Error::DimensionMismatch {
            got: fam.dimension(),
            expected: n,
        });
    }
    scaled_basis(lat, fam.modulus())?;
    let prefactor = fam.gauss_sum_product() / rat_to_f64(&lat.covolume());
    let conj = fam.conj();
    let points = lat.dual_points_in_shifted_box(y)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for p in &points {
        // chi-bar(gamma* tA) = chi-bar(k) with k the integer preimage
        let k: Vec<i64> = p
            .integer_preimage
            .iter()
            .map(|v| i64::try_from(v).expect("preimage fits i64"))
            .collect();
        let chi = conj.eval(&k)?;
        if chi.norm() == 0.0 {
            continue;
        }
        let coords: Vec<f64> = p.coordinates.iter().map(rat_to_f64).collect();
        let mut term = chi * rat_to_f64(&p.weight);
        for j in 0..n {
            let yj = rat_to_f64(&y[j]);
            term *= (t[j] * (2.0 * PI * (yj - coords[j])).cos()).exp();
        }
        let dot: f64 = x.iter().zip(&coords).map(|(&xj, c)| xj as f64 * c).sum();
        term *= Complex64::new(0.0, 2.0 * PI * dot).exp();
        sum += term;
    }
    Ok(sum * prefactor)
}

/// Runs both sides and reports the residual.
///
/// Primitive characters are required unless `allow_imprimitive` is set, in
/// which case the report carries a no-guarantee warning.
pub fn verify_identity(
    lat: &Lattice,
    fam: &DirichletCharacterFamily,
    x: &[i64],
    y: &[Rat],
    t: &[Complex64],
    tol: f64,
    allow_imprimitive: bool,
) -> Result<IdentityReport> {
    if !fam.all_primitive() && !allow_imprimitive {
        return Err(Error::Parse(
            "identity verification requires primitive characters (pass --allow-imprimitive to relax)"
                .into(),
        ));
    }
    let (lhs, radius, bound) = lhs_bessel_sum(lat, fam, x, y, t, tol)?;
    let rhs = rhs_dual_sum(lat, fam, x, y, t)?;
    let mut report = IdentityReport::new(lhs, rhs, radius, bound);
    if !fam.all_primitive() {
        report = report.with_warning("imprimitive characters: no identity guarantee");
    }
    Ok(report)
}

/// Discrete-torus trace identity: the Bessel sum over `prod_j m_j Z` at equal
/// arguments `2t` against the spectral sum of the torus Laplacian.
pub fn discrete_torus_trace(m: &[u64], t: Complex64) -> Result<IdentityReport> {
    assert!(m.iter().all(|&mj| mj >= 1));
    let n = m.len();
    let cfg = BesselEvalConfig::default();
    let s = (t * 2.0).norm();
    let scale = (-t * 2.0).exp();

    // the sum factorizes over coordinates; truncate each factor separately
    let mut lhs = Complex64::new(1.0, 0.0);
    let mut radius = 0i64;
    let mut tail = 0.0f64;
    for &mj in m {
        let mut r = 2i64;
        loop {
            let b = i_tail_bound((mj as i64 * r) as u64, s);
            if b * scale.norm() < 1e-13 {
                break;
            }
            r += 1;
            if r > RADIUS_CAP {
                return Err(Error::TruncationFailure {
                    cap: RADIUS_CAP,
                    tail_bound: b,
                });
            }
        }
        let mut factor = Complex64::new(0.0, 0.0);
        for k in -r..=r {
            factor += bessel_i_int(mj as i64 * k, t * 2.0, &cfg)?;
        }
        factor *= scale;
        // every other factor is bounded by e^{-2t} e^{|2t|} in modulus
        tail += i_tail_bound((mj as i64 * r) as u64, s) * scale.norm();
        radius = radius.max(r);
        lhs *= factor;
    }

    let vol: f64 = m.iter().map(|&mj| mj as f64).product();
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut k = vec![0u64; n];
    'outer: loop {
        let cos_sum: f64 = k
            .iter()
            .zip(m)
            .map(|(&kj, &mj)| (2.0 * PI * kj as f64 / mj as f64).cos())
            .sum();
        let lambda = 2.0 * n as f64 - 2.0 * cos_sum;
        rhs += (-t * lambda).exp();
        for j in (0..n).rev() {
            k[j] += 1;
            if k[j] < m[j] {
                continue 'outer;
            }
            k[j] = 0;
        }
        break;
    }
    rhs /= vol;
    Ok(IdentityReport::new(lhs, rhs, radius, tail))
}
