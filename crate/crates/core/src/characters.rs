//! Dirichlet characters modulo `q` as value tables: validation, primitivity
//! and conductor, Gauss sums, the Kronecker symbol, and the coordinatewise
//! product character on `Z^n`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use crate::{Error, Result};

/// A Dirichlet character modulo `q`, stored extensionally as its value table
/// on residues `0..q`. For `q = 1` the table is `[1]` and the character is
/// constant 1 on all of `Z`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
}

impl DirichletCharacter {
    /// Validates the table against the character axioms before accepting it.
    pub fn from_table(q: u64, values: Vec<Complex64>) -> Result<Self> {
        assert!(q >= 1);
        if values.len() != q as usize {
            return Err(Error::Parse(format!(
                "table length {} != modulus {}",
                values.len(),
                q
            )));
        }
        let chi = DirichletCharacter { modulus: q, values };
        chi.validate()?;
        Ok(chi)
    }

    /// The principal character modulo `q`.
    pub fn principal(q: u64) -> Self {
        let values = (0..q.max(1))
            .map(|a| {
                if q == 1 || a.gcd(&q) == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        DirichletCharacter { modulus: q.max(1), values }
    }

    /// The trivial character (q = 1), constant 1 on Z.
    pub fn trivial() -> Self {
        Self::principal(1)
    }

    /// The real character `a -> (D/a)` (Kronecker symbol) modulo `|D|`.
    pub fn kronecker(d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::UnsupportedModulus(0));
        }
        let q = d.unsigned_abs();
        let values: Vec<Complex64> = (0..q)
            .map(|a| Complex64::new(kronecker_symbol(d, a as i64) as f64, 0.0))
            .collect();
        // the table must still be a character; rejects moduli for which
        // (D/.) is not periodic mod |D| (non-fundamental discriminants)
        DirichletCharacter::from_table(q, values).map_err(|_| Error::UnsupportedModulus(d))
    }

    fn validate(&self) -> Result<()> {
        let q = self.modulus;
        if q == 1 {
            if (self.values[0] - 1.0).norm() > 1e-12 {
                return Err(Error::WrongSupport { residue: 0 });
            }
            return Ok(());
        }
        for a in 0..q {
            let coprime = a.gcd(&q) == 1;
            let v = self.values[a as usize];
            if coprime {
                if (v.norm() - 1.0).abs() > 1e-12 {
                    return Err(Error::NotRootOfUnity { residue: a });
                }
            } else if v.norm() != 0.0 {
                return Err(Error::WrongSupport { residue: a });
            }
        }
        if (self.values[1] - 1.0).norm() > 1e-12 {
            return Err(Error::NotMultiplicative { a: 1, b: 1, ab: 1 });
        }
        for a in 0..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            for b in a..q {
                if b.gcd(&q) != 1 {
                    continue;
                }
                let ab = (a * b) % q;
                let lhs = self.values[a as usize] * self.values[b as usize];
                if (lhs - self.values[ab as usize]).norm() > 1e-10 {
                    return Err(Error::NotMultiplicative { a, b, ab });
                }
            }
        }
        // each nonzero value must be a root of unity of order dividing the
        // group exponent
        let e = group_exponent(q);
        for a in 0..q {
            if a.gcd(&q) != 1 {
                continue;
            }
            if (self.values[a as usize].powu(e as u32) - 1.0).norm() > 1e-8 {
                return Err(Error::NotRootOfUnity { residue: a });
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Character value at any integer, via reduction mod `q`.
    pub fn eval(&self, a: i64) -> Complex64 {
        if self.modulus == 1 {
            return Complex64::new(1.0, 0.0);
        }
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// The complex-conjugate character.
    pub fn conj(&self) -> Self {
        DirichletCharacter {
            modulus: self.modulus,
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    /// Gauss sum `G(chi) = sum_a chi(a) e^{2 pi i a / q}`; 1 for q = 1.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        if q == 1 {
            return Complex64::new(1.0, 0.0);
        }
        (0..q)
            .map(|a| {
                self.values[a as usize]
                    * Complex64::new(0.0, 2.0 * PI * a as f64 / q as f64).exp()
            })
            .sum()
    }

    /// Smallest `f | q` such that the character factors through `(Z/fZ)^x`.
    pub fn conductor(&self) -> u64 {
        let q = self.modulus;
        'next: for f in divisors(q) {
            for a in 0..q {
                for b in 0..q {
                    if a.gcd(&q) != 1 || b.gcd(&q) != 1 {
                        continue;
                    }
                    if a % f == b % f
                        && (self.values[a as usize] - self.values[b as usize]).norm() > 1e-10
                    {
                        continue 'next;
                    }
                }
            }
            return f;
        }
        q
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        (0..self.modulus)
            .filter(|a| self.modulus == 1 || a.gcd(&self.modulus) == 1)
            .all(|a| (self.values[a as usize] - 1.0).norm() < 1e-12)
    }
}

/// `n` characters sharing a modulus, evaluated as a product over coordinates.
#[derive(Debug, Clone)]
pub struct DirichletCharacterFamily {
    modulus: u64,
    components: Vec<DirichletCharacter>,
}

impl DirichletCharacterFamily {
    pub fn new(components: Vec<DirichletCharacter>) -> Result<Self> {
        assert!(!components.is_empty());
        let q = components[0].modulus();
        if components.iter().any(|c| c.modulus() != q) {
            return Err(Error::Parse("family components must share a modulus".into()));
        }
        Ok(DirichletCharacterFamily { modulus: q, components })
    }

    /// The all-trivial family (q = 1) in dimension `n`.
    pub fn trivial(n: usize) -> Self {
        DirichletCharacterFamily {
            modulus: 1,
            components: vec![DirichletCharacter::trivial(); n],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[DirichletCharacter] {
        &self.components
    }

    pub fn all_primitive(&self) -> bool {
        self.components.iter().all(|c| c.modulus() == 1 || c.is_primitive())
    }

    /// `chi(a) = prod_j chi_j(a_j)`.
    pub fn eval(&self, a: &[i64]) -> Result<Complex64> {
        if a.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                got: self.components.len(),
                expected: a.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(a)
            .map(|(chi, &x)| chi.eval(x))
            .product())
    }

    pub fn gauss_sum_product(&self) -> Complex64 {
        self.components.iter().map(|c| c.gauss_sum()).product()
    }

    pub fn conj(&self) -> Self {
        DirichletCharacterFamily {
            modulus: self.modulus,
            components: self.components.iter().map(|c| c.conj()).collect(),
        }
    }
}

/// Kronecker symbol `(a/b)` extended to all integers.
pub fn kronecker_symbol(a: i64, b: i64) -> i64 {
    // (a/2) table indexed by a mod 8
    const TAB2: [i64; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (a, b);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        b /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1
    } else {
        TAB2[a.rem_euclid(8) as usize]
    };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 {
            k *= TAB2[b.rem_euclid(8) as usize];
        }
        // reciprocity for the odd parts
        if (a.rem_euclid(4) == 3) && (b.rem_euclid(4) == 3) {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn divisors(q: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=q).filter(|f| q.is_multiple_of(*f)).collect();
    d.sort();
    d
}

fn group_exponent(q: u64) -> u64 {
    (1..q)
        .filter(|a| a.gcd(&q) == 1)
        .map(|a| multiplicative_order(a, q))
        .fold(1u64, |acc, o| acc.lcm(&o))
}

fn multiplicative_order(a: u64, q: u64) -> u64 {
    let mut x = a % q;
    let mut o = 1;
    while x != 1 {
        x = (x * a) % q;
        o += 1;
    }
    o
}

/// Every Dirichlet character modulo `q`, built from a generating set of the
/// unit group. Used by the identity tests; `phi(q)` characters are returned.
pub fn all_characters(q: u64) -> Vec<DirichletCharacter> {
    if q == 1 {
        return vec![DirichletCharacter::trivial()];
    }
    let gens = unit_group_generators(q);
    let orders: Vec<u64> = gens.iter().map(|&(_, o)| o).collect();
    // map each unit to its exponent tuple by walking the whole group once
    let mut table: Vec<Option<Vec<u64>>> = vec![None; q as usize];
    let mut exps = vec![0u64; gens.len()];
    loop {
        let mut u = 1u64;
        for (&(g, _), &e) in gens.iter().zip(&exps) {
            u = (u * pow_mod(g, e, q)) % q;
        }
        table[u as usize] = Some(exps.clone());
        // odometer
        let mut i = 0;
        loop {
            if i == exps.len() {
                break;
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
        if i == exps.len() {
            break;
        }
    }
    let mut chars = Vec::new();
    let mut choice = vec![0u64; gens.len()];
    loop {
        let values: Vec<Complex64> = (0..q)
            .map(|a| match &table[a as usize] {
                None => Complex64::new(0.0, 0.0),
                Some(e) => {
                    let angle: f64 = e
                        .iter()
                        .zip(&orders)
                        .zip(&choice)
                        .map(|((&x, &o), &c)| 2.0 * PI * (x * c) as f64 / o as f64)
                        .sum();
                    Complex64::new(0.0, angle).exp()
                }
            })
            .collect();
        chars.push(DirichletCharacter { modulus: q, values });
        let mut i = 0;
        loop {
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
            if choice[i] < orders[i] {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    chars
}

/// Generators (with orders) of `(Z/qZ)^x`, via CRT on the prime-power parts.
fn unit_group_generators(q: u64) -> Vec<(u64, u64)> {
    let mut gens = Vec::new();
    let mut rest = q;
    let mut parts: Vec<(u64, u32)> = Vec::new();
    let mut p = 2u64;
    while rest > 1 {
        if rest.is_multiple_of(p) {
            let mut k = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                k += 1;
            }
            parts.push((p, k));
        }
        p += 1;
    }
    for &(p, k) in &parts {
        let pk = p.pow(k);
        let local: Vec<(u64, u64)> = if p == 2 {
            match k {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(pk - 1, 2), (5, pk / 4)],
            }
        } else {
            let phi = pk / p * (p - 1);
            let g = (2..pk)
                .find(|&g| g % p != 0 && multiplicative_order(g, pk) == phi)
                .expect("primitive root exists mod odd prime power");
            vec![(g, phi)]
        };
        // lift: generator at this component, 1 at the others
        let other = q / pk;
        for (g, o) in local {
            let lifted = crt(g, pk, 1, other);
            gens.push((lifted, o));
        }
    }
    gens
}

fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if n == 1 {
        return a % m;
    }
    (0..m * n)
        .find(|&x| x % m == a % m && x % n == b % n)
        .expect("moduli are coprime")
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // trivial character mod 1
        let t = DirichletCharacter::from_table(1, vec![one]).unwrap();
        assert_eq!(t.eval(17), one);
        // the nontrivial character mod 4
        let chi = DirichletCharacter::from_table(4, vec![zero, one, zero, -one]).unwrap();
        assert!(chi.is_primitive());
        // the principal character mod 4 is valid too
        let p = DirichletCharacter::from_table(4, vec![zero, one, zero, one]).unwrap();
        assert!(p.is_principal());
        // broken support rejected
        assert!(DirichletCharacter::from_table(4, vec![one, one, zero, one]).is_err());
        // non-multiplicative table rejected
        let i = Complex64::new(0.0, 1.0);
        assert!(matches!(
            DirichletCharacter::from_table(4, vec![zero, one, zero, i]),
            Err(Error::NotRootOfUnity { .. }) | Err(Error::NotMultiplicative { .. })
        ));
    }

    #[test]
    fn kronecker_mod_12() {
        let chi = DirichletCharacter::kronecker(12).unwrap();
        assert_eq!(chi.modulus(), 12);
        let want = [(1i64, 1.0), (5, -1.0), (7, -1.0), (11, 1.0)];
        for (a, v) in want {
            assert!((chi.eval(a).re - v).abs() < 1e-15, "a={a}");
            assert_eq!(chi.eval(a).im, 0.0);
        }
        for a in (0..12).filter(|a| a % 2 == 0 || a % 3 == 0) {
            assert_eq!(chi.eval(a).norm(), 0.0);
        }
        assert!(chi.is_primitive());
        assert_eq!(chi.conductor(), 12);
        // brute-force cross-check against Euler's criterion at odd primes
        for p in [5i64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let euler = pow_mod(12 % p as u64, ((p - 1) / 2) as u64, p as u64);
            let want = if euler == 1 { 1.0 } else { -1.0 };
            assert_eq!(chi.eval(p).re, want, "p={p}");
        }
    }

    #[test]
    fn gauss_sum_values() {
        assert_eq!(DirichletCharacter::trivial().gauss_sum(), Complex64::new(1.0, 0.0));
        let chi = DirichletCharacter::kronecker(12).unwrap();
        let g = chi.gauss_sum();
        assert!((g.re - 12f64.sqrt()).abs() < 1e-12);
        assert!(g.im.abs() < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_for_primitive_characters() {
        for q in 1..=24u64 {
            for chi in all_characters(q) {
                if chi.is_primitive() {
                    let g = chi.gauss_sum();
                    assert!(
                        (g.norm_sqr() - q as f64).abs() < 1e-10,
                        "q={q} |G|^2={}",
                        g.norm_sqr()
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_sum_conjugation_identity() {
        for q in 1..=24u64 {
            for chi in all_characters(q) {
                let lhs = chi.conj().gauss_sum();
                let rhs = chi.eval(-1) * chi.gauss_sum().conj();
                assert!((lhs - rhs).norm() < 1e-12, "q={q}");
            }
        }
    }

    #[test]
    fn dft_identity_for_primitive_characters() {
        for q in 1..=24u64 {
            for chi in all_characters(q) {
                if !chi.is_primitive() {
                    continue;
                }
                let g = chi.gauss_sum();
                for m in 0..q as i64 {
                    let dft: Complex64 = (0..q as i64)
                        .map(|a| {
                            chi.eval(a)
                                * Complex64::new(0.0, 2.0 * PI * (a * m) as f64 / q as f64).exp()
                        })
                        .sum();
                    assert!((dft - g * chi.conj().eval(m)).norm() < 1e-10, "q={q} m={m}");
                }
            }
        }
    }

    #[test]
    fn conductor_of_induced_character() {
        // the character mod 8 induced from the nontrivial character mod 4
        let mod4 = DirichletCharacter::kronecker(-4).unwrap();
        assert_eq!(mod4.modulus(), 4);
        let values = (0..8)
            .map(|a| if a % 2 == 0 { Complex64::new(0.0, 0.0) } else { mod4.eval(a) })
            .collect();
        let induced = DirichletCharacter::from_table(8, values).unwrap();
        assert_eq!(induced.conductor(), 4);
        assert!(!induced.is_primitive());
        // principal characters have conductor 1
        for q in 2..=12 {
            assert_eq!(DirichletCharacter::principal(q).conductor(), 1);
        }
    }

    #[test]
    fn family_product_evaluation() {
        let triv = DirichletCharacterFamily::trivial(3);
        assert_eq!(triv.eval(&[4, -7, 0]).unwrap(), Complex64::new(1.0, 0.0));

        let chi = DirichletCharacter::kronecker(12).unwrap();
        let fam = DirichletCharacterFamily::new(vec![chi.clone()]).unwrap();
        assert_eq!(fam.eval(&[5]).unwrap().re, -1.0);
        let fam2 = DirichletCharacterFamily::new(vec![chi.clone(), chi]).unwrap();
        assert_eq!(fam2.eval(&[5, 7]).unwrap().re, 1.0);
        assert!(fam2.eval(&[5]).is_err());
    }

    #[test]
    fn family_multiplicative_on_coprime_residues() {
        let chi = DirichletCharacter::kronecker(12).unwrap();
        let fam = DirichletCharacterFamily::new(vec![chi.clone(), chi]).unwrap();
        for a in [[1i64, 5], [7, 11], [5, 5]] {
            for b in [[5i64, 7], [11, 1]] {
                let ab = [a[0] * b[0], a[1] * b[1]];
                let lhs = fam.eval(&ab).unwrap();
                let rhs = fam.eval(&a).unwrap() * fam.eval(&b).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
