//! Integer and rational lattices `Gamma = Z^n A`: duals, covolume, coset
//! representatives, and enumeration of dual points in the closed box
//! `[-1/2, 1/2]^n` with the boundary-weight convention (endpoints count 1/2
//! per coordinate).
//!
//! All membership and boundary questions are decided in exact rational
//! arithmetic; a coordinate equal to 1/2 is recognised exactly, never by a
//! floating-point comparison.

use num_traits::{One, Signed, Zero};

use crate::exact::{rat_i64, Int, Rat, RatMat};
use crate::{Error, Result};

/// A full-rank lattice `Z^n A` given by the rows of `A`.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis: RatMat,
    inverse: RatMat,
    gram: RatMat,
}

/// A dual-lattice point inside the (possibly shifted) closed unit box,
/// together with its boundary weight.
#[derive(Debug, Clone)]
pub struct WeightedDualPoint {
    /// Exact coordinates of the point of `Gamma*`.
    pub coordinates: Vec<Rat>,
    /// Product over coordinates of 1 (interior) or 1/2 (boundary).
    pub weight: Rat,
    /// Integer vector `k` with `point = k * tA^{-1}`.
    pub integer_preimage: Vec<Int>,
}

impl Lattice {
    pub fn new(basis: RatMat) -> Result<Self> {
        let inverse = basis.inverse()?;
        let gram = basis.mul(&basis.transpose());
        Ok(Lattice { basis, inverse, gram })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(RatMat::from_i64(rows))
    }

    pub fn dimension(&self) -> usize {
        self.basis.n
    }

    pub fn basis(&self) -> &RatMat {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &RatMat {
        &self.inverse
    }

    pub fn gram(&self) -> &RatMat {
        &self.gram
    }

    pub fn covolume(&self) -> Rat {
        self.basis.det().abs()
    }

    pub fn is_integral(&self) -> bool {
        self.basis.is_integral()
    }

    /// The dual lattice, with basis `tA^{-1}`.
    pub fn dual(&self) -> Lattice {
        Lattice::new(self.inverse.transpose()).expect("inverse of a nonsingular matrix")
    }

    /// Exact membership test: `v` is in the lattice iff `v A^{-1}` is integral.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.inverse.row_vec_mul(v).iter().all(|c| c.is_integer())
    }

    /// Representatives of `Z^n / Gamma`, via the Hermite normal form of `A`.
    /// Requires an integral basis; returns exactly `|det A|` vectors.
    pub fn coset_representatives(&self) -> Result<Vec<Vec<Int>>> {
        let a = self.basis.to_int()?;
        let (h, _) = a.hnf_with_transform();
        let n = self.dimension();
        let mut reps: Vec<Vec<Int>> = vec![vec![Int::zero(); n]];
        for i in 0..n {
            let d: Int = h.rows[i][i].clone();
            let mut next = Vec::new();
            for rep in &reps {
                let mut r = Int::zero();
                while r < d {
                    let mut v = rep.clone();
                    v[i] = r.clone();
                    next.push(v);
                    r += 1;
                }
            }
            reps = next;
        }
        Ok(reps)
    }

    /// All points of the dual lattice with every coordinate in
    /// `[-1/2, 1/2]`, with boundary weights.
    pub fn dual_points_in_box(&self) -> Result<Vec<WeightedDualPoint>> {
        let n = self.dimension();
        self.dual_points_in_shifted_box(&vec![Rat::zero(); n])
    }

    /// Dual points with `|y_j - coordinate_j| <= 1/2` for every coordinate,
    /// weighted 1/2 per coordinate attaining 1/2 exactly.
    pub fn dual_points_in_shifted_box(&self, y: &[Rat]) -> Result<Vec<WeightedDualPoint>> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        let n = self.dimension();
        assert_eq!(y.len(), n);
        let half = rat_i64(1, 2);
        let dual_basis = self.inverse.transpose();
        // k = point * tA, so |k_j| <= sum_i (1/2 + |y_i|) |A_{ji}|
        let mut bounds = Vec::with_capacity(n);
        for j in 0..n {
            let mut b = Rat::zero();
            for i in 0..n {
                b += (&half + y[i].abs()) * self.basis.rows[j][i].abs();
            }
            bounds.push(b.floor().to_integer());
        }
        let mut out = Vec::new();
        let mut k = vec![Int::zero(); n];
        enumerate_box(&bounds, &mut k, 0, &mut |k| {
            let kr: Vec<Rat> = k.iter().map(|v| Rat::from_integer(v.clone())).collect();
            let point = dual_basis.row_vec_mul(&kr);
            let mut weight = Rat::one();
            for (j, c) in point.iter().enumerate() {
                let d = (&y[j] - c).abs();
                if d > half {
                    return;
                }
                if d == half {
                    weight *= &half;
                }
            }
            out.push(WeightedDualPoint {
                coordinates: point,
                weight,
                integer_preimage: k.to_vec(),
            });
        });
        Ok(out)
    }
}

fn enumerate_box(
    bounds: &[Int],
    k: &mut Vec<Int>,
    depth: usize,
    visit: &mut impl FnMut(&[Int]),
) {
    if depth == bounds.len() {
        visit(k);
        return;
    }
    let b = bounds[depth].clone();
    let mut v = -b.clone();
    while v <= b {
        k[depth] = v.clone();
        enumerate_box(bounds, k, depth + 1, visit);
        v += 1;
    }
}
