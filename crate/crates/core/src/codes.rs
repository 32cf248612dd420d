//! Linear codes over Z/mZ, dual codes, complete and Hamming weight
//! enumerators, and the Bessel-sum / MacWilliams identities relating them.
//!
//! Codes are stored extensionally (the full codeword list) since every
//! identity here requires enumerating the code or its dual anyway; caps keep
//! this at desk scale.

use num_complex::Complex64;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::f64::consts::PI;

use crate::lattice::Lattice;
use crate::lattice_sums::product_tail_radius;
use crate::report::IdentityReport;
use crate::special::{a_function, bessel_i_int, BesselEvalConfig};
use crate::{Error, Result};

/// Cap on enumerated submodule sizes.
const ENUM_CAP: usize = 1_000_000;

/// A linear code over Z/mZ of length n, stored as the full sorted codeword
/// list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    m: u64,
    n: usize,
    codewords: Vec<Vec<u64>>,
}

impl LinearCode {
    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn codewords(&self) -> &[Vec<u64>] {
        &self.codewords
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn contains_word(&self, w: &[u64]) -> bool {
        self.codewords.binary_search_by(|c| c.as_slice().cmp(w)).is_ok()
    }

    /// The shifted coset `rho(x) + C` as a word list.
    pub fn coset(&self, x: &[i64]) -> Vec<Vec<u64>> {
        assert_eq!(x.len(), self.n);
        let shift: Vec<u64> = x.iter().map(|&v| v.rem_euclid(self.m as i64) as u64).collect();
        let mut words: Vec<Vec<u64>> = self
            .codewords
            .iter()
            .map(|c| {
                (0..self.n)
                    .map(|j| (c[j] + shift[j]) % self.m)
                    .collect()
            })
            .collect();
        words.sort();
        words
    }

    pub fn cwe(&self) -> WeightEnumeratorPolynomial {
        cwe(self.m, self.n, &self.codewords)
    }

    pub fn coset_cwe(&self, x: &[i64]) -> WeightEnumeratorPolynomial {
        cwe(self.m, self.n, &self.coset(x))
    }

    /// Z-basis of the preimage lattice `rho^{-1}(C)` (contains m Z^n, index
    /// m^n / |C| in Z^n).
    pub fn preimage_lattice(&self) -> Result<Lattice> {
        let mut rows: Vec<Vec<i64>> = self
            .codewords
            .iter()
            .map(|c| c.iter().map(|&v| v as i64).collect())
            .collect();
        for i in 0..self.n {
            let mut row = vec![0i64; self.n];
            row[i] = self.m as i64;
            rows.push(row);
        }
        Lattice::from_i64(&row_hnf_basis(rows, self.n))
    }
}

/// Hermite-style upper-triangular basis of the row span of an integer
/// generator stack known to have full column rank n.
fn row_hnf_basis(mut rows: Vec<Vec<i64>>, n: usize) -> Vec<Vec<i64>> {
    let mut basis: Vec<Vec<i64>> = Vec::with_capacity(n);
    for col in 0..n {
        // eliminate column `col` across remaining rows by gcd row operations
        loop {
            rows.retain(|r| r.iter().any(|&v| v != 0));
            let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if idx.is_empty() {
                break;
            }
            idx.sort_by_key(|&i| rows[i][col].abs());
            if idx.len() == 1 {
                break;
            }
            let (p, q) = (idx[0], idx[1]);
            let f = rows[q][col] / rows[p][col];
            for j in 0..n {
                rows[q][j] -= f * rows[p][j];
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut pivot = rows.swap_remove(p);
            if pivot[col] < 0 {
                for v in pivot.iter_mut() {
                    *v = -*v;
                }
            }
            basis.push(pivot);
        } else {
            panic!("generator stack does not have full rank");
        }
    }
    basis
}

/// Complete weight enumerator: exponent vector of (X_0, ..., X_{m-1}) mapped
/// to its nonnegative integer coefficient; homogeneous of degree n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightEnumeratorPolynomial {
    pub m: u64,
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, u64>,
}

impl WeightEnumeratorPolynomial {
    pub fn evaluate(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.m as usize);
        let mut sum = Complex64::new(0.0, 0.0);
        for (exps, &coeff) in &self.terms {
            let mut term = Complex64::new(coeff as f64, 0.0);
            for (j, &e) in exps.iter().enumerate() {
                term *= values[j].powu(e);
            }
            sum += term;
        }
        sum
    }

    pub fn evaluate_at_ones(&self) -> u64 {
        self.terms.values().sum()
    }
}

/// Complete weight enumerator of an arbitrary word list over Z/mZ.
pub fn cwe(m: u64, n: usize, words: &[Vec<u64>]) -> WeightEnumeratorPolynomial {
    let mut terms: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for w in words {
        assert_eq!(w.len(), n);
        let mut exps = vec![0u32; m as usize];
        for &v in w {
            exps[(v % m) as usize] += 1;
        }
        *terms.entry(exps).or_insert(0) += 1;
    }
    WeightEnumeratorPolynomial { m, n, terms }
}

/// Hamming weight enumerator `W_B(X, Y) = sum X^{n - wt(c)} Y^{wt(c)}`, as
/// (X-exponent, Y-exponent) -> coefficient.
pub fn hamming_we(poly: &WeightEnumeratorPolynomial) -> BTreeMap<(u32, u32), u64> {
    let mut out: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    for (exps, &coeff) in &poly.terms {
        let zero = exps[0];
        let weight: u32 = exps[1..].iter().sum();
        *out.entry((zero, weight)).or_insert(0) += coeff;
    }
    out
}

/// Enumerates the Z/mZ-span of the generators by closure.
pub fn code_from_generators(m: u64, n: usize, generators: &[Vec<u64>]) -> Result<LinearCode> {
    assert!(m >= 2, "modulus must be at least 2");
    for g in generators {
        assert_eq!(g.len(), n, "generator length mismatch");
        assert!(g.iter().all(|&v| v < m), "generator entries must lie in [0, m)");
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let zero = vec![0u64; n];
    seen.insert(zero.clone());
    let mut queue: VecDeque<Vec<u64>> = VecDeque::from([zero]);
    while let Some(w) = queue.pop_front() {
        for g in generators {
            let next: Vec<u64> = (0..n).map(|j| (w[j] + g[j]) % m).collect();
            if seen.insert(next.clone()) {
                if seen.len() > ENUM_CAP {
                    return Err(Error::EnumerationTooLarge { cap: ENUM_CAP });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(LinearCode {
        m,
        n,
        codewords: seen.into_iter().collect(),
    })
}

/// Brute-force annihilator `{x | x . y = 0 for all y in C}`; checks
/// `|C| |Cperp| = m^n`.
pub fn dual_code(code: &LinearCode) -> Result<LinearCode> {
    let m = code.m;
    let n = code.n;
    let total = (m as usize).checked_pow(n as u32).filter(|&v| v <= ENUM_CAP);
    let Some(total) = total else {
        return Err(Error::EnumerationTooLarge { cap: ENUM_CAP });
    };
    let mut words = Vec::new();
    let mut x = vec![0u64; n];
    for _ in 0..total {
        let annihilates = code.codewords.iter().all(|c| {
            let dot: u64 = (0..n).map(|j| x[j] * c[j]).sum();
            dot.is_multiple_of(m)
        });
        if annihilates {
            words.push(x.clone());
        }
        for j in (0..n).rev() {
            x[j] += 1;
            if x[j] < m {
                break;
            }
            x[j] = 0;
        }
    }
    let dual = LinearCode { m, n, codewords: words };
    assert_eq!(
        code.size() as u128 * dual.size() as u128,
        (m as u128).pow(n as u32),
        "|C| |Cperp| must equal m^n"
    );
    Ok(dual)
}

/// Kernel of a parity-check matrix: `{c | rho(H) c^t = 0}`.
pub fn parity_check_code(m: u64, n: usize, h: &[Vec<i64>]) -> Result<LinearCode> {
    assert!(m >= 2);
    for row in h {
        assert_eq!(row.len(), n, "parity-check row length mismatch");
    }
    let total = (m as usize).checked_pow(n as u32).filter(|&v| v <= ENUM_CAP);
    let Some(total) = total else {
        return Err(Error::EnumerationTooLarge { cap: ENUM_CAP });
    };
    let hm: Vec<Vec<u64>> = h
        .iter()
        .map(|row| row.iter().map(|&v| v.rem_euclid(m as i64) as u64).collect())
        .collect();
    let mut words = Vec::new();
    let mut c = vec![0u64; n];
    for _ in 0..total {
        let ok = hm
            .iter()
            .all(|row| (0..n).map(|j| row[j] * c[j]).sum::<u64>() % m == 0);
        if ok {
            words.push(c.clone());
        }
        for j in (0..n).rev() {
            c[j] += 1;
            if c[j] < m {
                break;
            }
            c[j] = 0;
        }
    }
    Ok(LinearCode { m, n, codewords: words })
}

/// Truncated Bessel sum over the coset `x + rho^{-1}(C)` with a rigorous
/// tail bound: the left-hand side of the code identities.
fn bessel_sum_over_code(
    code: &LinearCode,
    x: &[i64],
    t: &[Complex64],
    tol: f64,
) -> Result<(Complex64, i64, f64)> {
    let n = code.n;
    assert_eq!(x.len(), n);
    assert_eq!(t.len(), n);
    let m = code.m as i64;
    let coset: HashSet<Vec<u64>> = code.coset(x).into_iter().collect();
    let s: Vec<f64> = t.iter().map(|tj| tj.norm()).collect();
    let (radius, tail) = product_tail_radius(&s, tol)?;
    let reach = radius + x.iter().map(|v| v.abs()).max().unwrap_or(0);
    let cfg = BesselEvalConfig::default();
    let mut tables: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for tj in t {
        let mut col = Vec::with_capacity(reach as usize + 1);
        for a in 0..=reach {
            col.push(bessel_i_int(a, *tj, &cfg)?);
        }
        tables.push(col);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut g = vec![-reach; n];
    'outer: loop {
        let word: Vec<u64> = g.iter().map(|&v| v.rem_euclid(m) as u64).collect();
        if coset.contains(&word) {
            let mut prod = Complex64::new(1.0, 0.0);
            for j in 0..n {
                prod *= tables[j][g[j].unsigned_abs() as usize];
            }
            sum += prod;
        }
        for j in (0..n).rev() {
            g[j] += 1;
            if g[j] <= reach {
                continue 'outer;
            }
            g[j] = -reach;
        }
        break;
    }
    Ok((sum, radius, tail))
}

/// Checks the Bessel-sum / weight-enumerator identity: the truncated sum of
/// `prod_j I_{gamma_j}(t)` over `x + rho^{-1}(C)` against
/// `cwe_{rho(x)+C}` evaluated at the `A`-function values, plus the
/// per-coordinate-argument generalization.
pub fn verify_cwe_bessel(
    code: &LinearCode,
    x: &[i64],
    t: Complex64,
    tol: f64,
) -> Result<IdentityReport> {
    let n = code.n;
    let m = code.m;
    let tv = vec![t; n];
    let (lhs, radius, tail) = bessel_sum_over_code(code, x, &tv, tol)?;
    let a_values: Vec<Complex64> = (0..m).map(|y| a_function(y as i64, t, m)).collect();
    let rhs = code.coset_cwe(x).evaluate(&a_values);
    let mut report = IdentityReport::new(lhs, rhs, radius, tail);

    // per-coordinate arguments: rhs = sum_{c in C} prod_j A_{x_j + c_j}(t_j)
    let tv: Vec<Complex64> = (0..n)
        .map(|j| t * (1.0 + 0.3 * j as f64))
        .collect();
    let (lhs_multi, _, tail_multi) = bessel_sum_over_code(code, x, &tv, tol)?;
    let mut rhs_multi = Complex64::new(0.0, 0.0);
    for c in &code.codewords {
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..n {
            prod *= a_function(x[j] + c[j] as i64, tv[j], m);
        }
        rhs_multi += prod;
    }
    let residual_multi = (lhs_multi - rhs_multi).norm() - tail_multi;
    if residual_multi > report.abs_residual {
        report.abs_residual = residual_multi;
    }
    Ok(report)
}

/// Checks the MacWilliams-type identity: `cwe_{rho(x)+C}(m A_0, ..., m
/// A_{m-1})` against the dual-code sum, plus the diagonal cwe form when `x`
/// is constant.
pub fn verify_macwilliams_bessel(code: &LinearCode, x: &[i64], t: Complex64) -> Result<IdentityReport> {
    let n = code.n;
    let m = code.m;
    assert_eq!(x.len(), n);
    let a_values: Vec<Complex64> = (0..m)
        .map(|y| a_function(y as i64, t, m) * m as f64)
        .collect();
    let lhs = code.coset_cwe(x).evaluate(&a_values);
    let dual = dual_code(code)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for c in &dual.codewords {
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 0..n {
            let ang = 2.0 * PI * c[j] as f64 / m as f64;
            prod *= (t * ang.cos()).exp() * Complex64::new(0.0, ang * x[j] as f64).exp();
        }
        rhs += prod;
    }
    rhs *= code.size() as f64;
    let mut report = IdentityReport::new(lhs, rhs, 0, 0.0);

    if n > 0 && x.iter().all(|&v| v == x[0]) {
        // diagonal form: #C cwe_{Cperp}(e^{t cos(2 pi l / m)} e^{2 pi i x l / m})
        let values: Vec<Complex64> = (0..m)
            .map(|l| {
                let ang = 2.0 * PI * l as f64 / m as f64;
                (t * ang.cos()).exp() * Complex64::new(0.0, ang * x[0] as f64).exp()
            })
            .collect();
        let diag = dual.cwe().evaluate(&values) * code.size() as f64;
        let residual_diag = (lhs - diag).norm();
        if residual_diag > report.abs_residual {
            report.abs_residual = residual_diag;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_i64, Rat};
    use num_traits::Zero;

    fn repetition() -> LinearCode {
        code_from_generators(2, 3, &[vec![1, 1, 1]]).unwrap()
    }

    #[test]
    fn closure_enumeration() {
        let c = repetition();
        assert_eq!(c.codewords(), &[vec![0, 0, 0], vec![1, 1, 1]]);
        let c = code_from_generators(4, 1, &[vec![2]]).unwrap();
        assert_eq!(c.codewords(), &[vec![0], vec![2]]);
        let c = code_from_generators(3, 2, &[]).unwrap();
        assert_eq!(c.codewords(), &[vec![0, 0]]);
    }

    #[test]
    fn dual_examples() {
        let d = dual_code(&repetition()).unwrap();
        assert_eq!(
            d.codewords(),
            &[vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]
        );
        let full = code_from_generators(2, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(dual_code(&full).unwrap().size(), 1);
        let c = code_from_generators(4, 1, &[vec![2]]).unwrap();
        assert_eq!(dual_code(&c).unwrap().codewords(), &[vec![0], vec![2]]);
    }

    #[test]
    fn double_dual_and_counting() {
        for (m, n, gens) in [
            (2u64, 3usize, vec![vec![1, 1, 1]]),
            (3, 2, vec![vec![1, 2]]),
            (4, 2, vec![vec![2, 0], vec![0, 2]]),
            (5, 3, vec![vec![1, 2, 3]]),
            (4, 3, vec![vec![1, 2, 3]]),
        ] {
            let c = code_from_generators(m, n, &gens).unwrap();
            let d = dual_code(&c).unwrap();
            assert_eq!(c.size() as u128 * d.size() as u128, (m as u128).pow(n as u32));
            assert_eq!(dual_code(&d).unwrap(), c, "m={m} n={n}");
        }
    }

    #[test]
    fn cwe_examples() {
        let c = repetition();
        let p = c.cwe();
        assert_eq!(p.terms.get(&vec![3, 0]), Some(&1));
        assert_eq!(p.terms.get(&vec![0, 3]), Some(&1));
        assert_eq!(p.evaluate_at_ones(), 2);
        let w = hamming_we(&p);
        assert_eq!(w.get(&(3, 0)), Some(&1));
        assert_eq!(w.get(&(0, 3)), Some(&1));

        let d = dual_code(&c).unwrap().cwe();
        assert_eq!(d.terms.get(&vec![3, 0]), Some(&1));
        assert_eq!(d.terms.get(&vec![1, 2]), Some(&3));
        assert_eq!(d.evaluate_at_ones(), 4);

        let trivial = code_from_generators(3, 2, &[]).unwrap().cwe();
        assert_eq!(trivial.terms.get(&vec![2, 0, 0]), Some(&1));
        assert_eq!(trivial.terms.len(), 1);
    }

    #[test]
    fn parity_check_examples() {
        let c = parity_check_code(2, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(c.size(), 1);
        let even = parity_check_code(2, 3, &[vec![1, 1, 1]]).unwrap();
        assert_eq!(even.size(), 4);
        assert_eq!(even, dual_code(&repetition()).unwrap());
    }

    #[test]
    fn congruence_sum_equals_code_sum() {
        // the parity-check kernel and the generator span give the same
        // Bessel sum
        let from_h = parity_check_code(2, 3, &[vec![1, 1, 1]]).unwrap();
        let from_g = code_from_generators(2, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(from_h, from_g);
        let t = Complex64::new(0.8, 0.0);
        let a = bessel_sum_over_code(&from_h, &[0, 0, 0], &[t; 3], 1e-12).unwrap();
        let b = bessel_sum_over_code(&from_g, &[0, 0, 0], &[t; 3], 1e-12).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn cwe_bessel_zero_code() {
        // C = {0} in (Z/2Z)^1: sum over 2Z of I_gamma(t) = cosh t = A_0(t)
        let c = code_from_generators(2, 1, &[]).unwrap();
        let t = Complex64::new(1.1, 0.0);
        let rep = verify_cwe_bessel(&c, &[0], t, 1e-12).unwrap();
        assert!(rep.abs_residual < 1e-11 + rep.lhs_tail_bound, "{rep:?}");
        assert!((rep.lhs_value() - t.cosh()).norm() < 1e-11);
        assert!((rep.rhs_value() - a_function(0, t, 2)).norm() < 1e-14);
    }

    #[test]
    fn cwe_bessel_full_space() {
        // C = R^n: LHS = e^{nt}, RHS = (sum_y A_y)^n = e^{nt}
        let c = code_from_generators(3, 2, &[vec![1, 0], vec![0, 1]]).unwrap();
        let t = Complex64::new(0.9, 0.0);
        let rep = verify_cwe_bessel(&c, &[0, 0], t, 1e-12).unwrap();
        assert!(rep.abs_residual < 1e-10 + rep.lhs_tail_bound, "{rep:?}");
        assert!((rep.lhs_value() - (t * 2.0).exp()).norm() < 1e-10);
    }

    #[test]
    fn cwe_bessel_repetition() {
        let rep = verify_cwe_bessel(&repetition(), &[0, 0, 0], Complex64::new(0.7, 0.0), 1e-12)
            .unwrap();
        assert!(rep.abs_residual < 1e-10 + rep.lhs_tail_bound, "{rep:?}");
        // shifted coset with rho(x) not in C
        let rep = verify_cwe_bessel(&repetition(), &[1, 0, 0], Complex64::new(0.7, 0.0), 1e-12)
            .unwrap();
        assert!(rep.abs_residual < 1e-10 + rep.lhs_tail_bound, "{rep:?}");
    }

    #[test]
    fn macwilliams_repetition_binary_form() {
        // W_C(2A_x, 2A_{x+1}) = 2^k W_{Cperp}(e^t, (-1)^x e^{-t})
        let c = repetition();
        let t = Complex64::new(0.6, 0.0);
        for x in [0i64, 1] {
            let rep = verify_macwilliams_bessel(&c, &[x, x, x], t).unwrap();
            assert!(rep.abs_residual < 1e-10, "x={x} {rep:?}");
            let big_x = t.exp();
            let big_y = (-t).exp() * if x % 2 == 0 { 1.0 } else { -1.0 };
            // W_{Cperp}(X, Y) = X^3 + 3 X Y^2
            let classical = (big_x.powu(3) + big_x * big_y.powu(2) * 3.0) * 2.0;
            assert!((rep.lhs_value() - classical).norm() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn macwilliams_misc_cases() {
        let zero = code_from_generators(3, 2, &[]).unwrap();
        let rep = verify_macwilliams_bessel(&zero, &[1, 2], Complex64::new(0.8, 0.0)).unwrap();
        assert!(rep.abs_residual < 1e-10, "{rep:?}");
        let c = code_from_generators(4, 2, &[vec![1, 2]]).unwrap();
        let rep = verify_macwilliams_bessel(&c, &[0, 1], Complex64::new(1.0, 0.4)).unwrap();
        assert!(rep.abs_residual < 1e-9, "{rep:?}");
    }

    #[test]
    fn preimage_lattice_duality() {
        // rho^{-1}(Cperp) = m (rho^{-1}(C))* as lattices
        for (m, n, gens) in [
            (2u64, 3usize, vec![vec![1u64, 1, 1]]),
            (3, 2, vec![vec![1, 2]]),
            (4, 2, vec![vec![1, 2]]),
        ] {
            let c = code_from_generators(m, n, &gens).unwrap();
            let d = dual_code(&c).unwrap();
            let lat_c = c.preimage_lattice().unwrap();
            let lat_d = d.preimage_lattice().unwrap();
            let scaled_dual = lat_c.dual(); // m * dual has basis m tA^{-1}
            // generators of rho^{-1}(Cperp) lie in m (rho^{-1}(C))*
            for row in &lat_d.basis().rows {
                let v: Vec<Rat> = row.iter().map(|r| r / rat_i64(m as i64, 1)).collect();
                assert!(scaled_dual.contains(&v), "m={m}");
            }
            // and conversely m (rho^{-1}(C))* subset rho^{-1}(Cperp)
            for row in &scaled_dual.basis().rows {
                let v: Vec<Rat> = row.iter().map(|r| r * rat_i64(m as i64, 1)).collect();
                assert!(lat_d.contains(&v), "m={m}");
            }
        }
    }

    #[test]
    fn enumeration_cap_enforced() {
        assert!(matches!(
            parity_check_code(10, 7, &[vec![0, 0, 0, 0, 0, 0, 0]]),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn cwe_homogeneous() {
        let c = code_from_generators(4, 3, &[vec![1, 2, 3]]).unwrap();
        let p = c.cwe();
        for exps in p.terms.keys() {
            assert_eq!(exps.iter().sum::<u32>(), 3);
        }
        assert_eq!(p.evaluate_at_ones() as usize, c.size());
        let _ = Complex64::zero();
    }
}
