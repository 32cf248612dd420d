//! Report types shared by the identity checkers and the CLI.
//!
//! Complex numbers are serialized as two-element `[re, im]` arrays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// JSON wire form of a complex number.
pub fn complex_json(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Result of comparing two independent evaluations of one identity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_residual: f64,
    pub lhs_truncation_radius: i64,
    /// Rigorous upper bound for the truncated LHS tail.
    pub lhs_tail_bound: f64,
    /// Set when the result carries no identity guarantee (e.g. imprimitive
    /// characters admitted on request).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl IdentityReport {
    pub fn new(lhs: Complex64, rhs: Complex64, radius: i64, tail_bound: f64) -> Self {
        IdentityReport {
            lhs: complex_json(lhs),
            rhs: complex_json(rhs),
            abs_residual: (lhs - rhs).norm(),
            lhs_truncation_radius: radius,
            lhs_tail_bound: tail_bound,
            warning: None,
        }
    }

    pub fn with_warning(mut self, w: impl Into<String>) -> Self {
        self.warning = Some(w.into());
        self
    }

    pub fn lhs_value(&self) -> Complex64 {
        Complex64::new(self.lhs[0], self.lhs[1])
    }

    pub fn rhs_value(&self) -> Complex64 {
        Complex64::new(self.rhs[0], self.rhs[1])
    }

    /// Pass iff the residual is beneath the tolerance plus the reported tail.
    pub fn passes(&self, tol: f64) -> bool {
        self.abs_residual < tol + self.lhs_tail_bound
    }
}

/// A truncated series value with its rigorous tail bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaValue {
    pub value: [f64; 2],
    pub series_terms_used: u64,
    pub tail_bound: f64,
}

impl ThetaValue {
    pub fn new(value: Complex64, terms: u64, tail_bound: f64) -> Self {
        ThetaValue {
            value: complex_json(value),
            series_terms_used: terms,
            tail_bound,
        }
    }

    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value[0], self.value[1])
    }
}
