//! Lattice sums of I-Bessel functions, with characters, and everything they
//! connect to: dual-lattice evaluations, theta and Dedekind eta transformation
//! formulas, complete weight enumerators of linear codes over Z/mZ, and heat
//! kernels on lattices.
//!
//! Each identity is computed by two independent routes and compared; every
//! truncated series carries a rigorous tail bound, and results are reported as
//! [`report::IdentityReport`] values with the residual and the bound side by
//! side.

// index-style loops are clearer than iterator chains in the numeric kernels
#![allow(clippy::needless_range_loop)]

pub mod characters;
pub mod cli;
pub mod codes;
pub mod error;
pub mod exact;
pub mod heat;
pub mod lattice;
pub mod lattice_sums;
pub mod report;
pub mod special;
pub mod theta;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
