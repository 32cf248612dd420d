//! Exact linear algebra over the rationals and the integers.
//!
//! Everything here is exact: determinants, inverses, Hermite normal form.
//! Floating point never decides a membership or boundary question.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn rat_i64(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(Int::from(p))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// A square matrix of exact rationals, stored row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    pub n: usize,
    pub rows: Vec<Vec<Rat>>,
}

impl RatMat {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        RatMat { n, rows }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
                .collect(),
        )
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            (0..self.n)
                .map(|j| (0..self.n).map(|i| self.rows[i][j].clone()).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &RatMat) -> Self {
        assert_eq!(self.n, other.n);
        Self::new(
            (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| {
                            (0..self.n)
                                .map(|k| &self.rows[i][k] * &other.rows[k][j])
                                .sum()
                        })
                        .collect()
                })
                .collect(),
        )
    }

    /// Row vector times matrix: `v * M`.
    pub fn row_vec_mul(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &v[i] * &self.rows[i][j]).sum())
            .collect()
    }

    pub fn det(&self) -> Rat {
        let mut m = self.rows.clone();
        let n = self.n;
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col].clone();
            let inv = m[col][col].recip();
            for j in col..n {
                m[col][j] = &m[col][j] * &inv;
            }
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for j in col..n {
                    let sub = &f * &m[col][j];
                    m[r][j] = &m[r][j] - &sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<RatMat> {
        let n = self.n;
        let mut m = self.rows.clone();
        let mut inv = RatMat::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .ok_or(Error::SingularBasis)?;
            m.swap(pivot, col);
            inv.swap(pivot, col);
            let p = m[col][col].recip();
            for j in 0..n {
                m[col][j] = &m[col][j] * &p;
                inv[col][j] = &inv[col][j] * &p;
            }
            for r in 0..n {
                if r == col || m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone();
                for j in 0..n {
                    let s = &f * &m[col][j];
                    m[r][j] = &m[r][j] - &s;
                    let s = &f * &inv[col][j];
                    inv[r][j] = &inv[r][j] - &s;
                }
            }
        }
        Ok(RatMat::new(inv))
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_integer())
    }

    pub fn to_int(&self) -> Result<IntMat> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(IntMat {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_integer()).collect())
                .collect(),
        })
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(rat_to_f64).collect())
            .collect()
    }
}

/// A square integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub n: usize,
    pub rows: Vec<Vec<Int>>,
}

impl IntMat {
    pub fn to_rat(&self) -> RatMat {
        RatMat::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect())
                .collect(),
        )
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U * self = H`,
    /// `U` unimodular and `H` upper triangular with positive diagonal.
    /// The off-diagonal entries above each pivot are reduced into `[0, h_ii)`.
    pub fn hnf_with_transform(&self) -> (IntMat, IntMat) {
        let n = self.n;
        let mut h = self.rows.clone();
        let mut u: Vec<Vec<Int>> = (0..n)
            .map(|i| (0..n).map(|j| Int::from((i == j) as i64)).collect())
            .collect();
        for col in 0..n {
            // clear below the pivot by gcd-style row operations
            loop {
                let mut pivot: Option<usize> = None;
                for r in col..n {
                    if !h[r][col].is_zero() {
                        pivot = Some(match pivot {
                            None => r,
                            Some(p) => {
                                if h[r][col].abs() < h[p][col].abs() {
                                    r
                                } else {
                                    p
                                }
                            }
                        });
                    }
                }
                let p = pivot.expect("singular matrix has no HNF here");
                h.swap(p, col);
                u.swap(p, col);
                let mut done = true;
                for r in col + 1..n {
                    if h[r][col].is_zero() {
                        continue;
                    }
                    let q = div_round(&h[r][col], &h[col][col]);
                    for j in 0..n {
                        let s = &q * &h[col][j];
                        h[r][j] -= s;
                        let s = &q * &u[col][j];
                        u[r][j] -= s;
                    }
                    if !h[r][col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[col][col].is_negative() {
                for j in 0..n {
                    h[col][j] = -h[col][j].clone();
                    u[col][j] = -u[col][j].clone();
                }
            }
            // reduce rows above the pivot
            for r in 0..col {
                let q = num_integer::Integer::div_floor(&h[r][col], &h[col][col]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let s = &q * &h[col][j];
                    h[r][j] -= s;
                    let s = &q * &u[col][j];
                    u[r][j] -= s;
                }
            }
        }
        (IntMat { n, rows: h }, IntMat { n, rows: u })
    }
}

fn div_round(a: &Int, b: &Int) -> Int {
    // nearest-integer quotient, ties toward zero
    let two = Int::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if (&r * &two).abs() > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
