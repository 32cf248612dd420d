use thiserror::Error;

/// Errors shared across the crate. Each variant names the violated contract.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series tail bound not below tolerance within {max_terms} terms")]
    TermBudgetExceeded { max_terms: usize },
    #[error("quadrature did not converge: successive levels differ by {last_delta:e}")]
    QuadratureNotConverged { last_delta: f64 },
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("lattice basis is not integral")]
    NotIntegral,
    #[error("character table is not multiplicative: chi({a})*chi({b}) != chi({ab})")]
    NotMultiplicative { a: u64, b: u64, ab: u64 },
    #[error("character value at {residue} must be zero iff gcd with the modulus is > 1")]
    WrongSupport { residue: u64 },
    #[error("character value at {residue} is not a root of unity")]
    NotRootOfUnity { residue: u64 },
    #[error("unsupported Kronecker modulus {0}")]
    UnsupportedModulus(i64),
    #[error("entry A[{row}][{col}] is not divisible by q = {q}")]
    DivisibilityViolation { row: usize, col: usize, q: u64 },
    #[error("truncation radius exceeded cap {cap} (tail bound {tail_bound:e})")]
    TruncationFailure { cap: i64, tail_bound: f64 },
    #[error("|y_{coord} - dual point| is within 1e-12 of 1/2 but y is not exactly rational")]
    BoundaryAmbiguity { coord: usize },
    #[error("code enumeration would exceed the cap of {cap} words")]
    EnumerationTooLarge { cap: usize },
    #[error("point {0} is outside the state window")]
    OutOfWindow(String),
    #[error("point is not on the lattice")]
    NotLatticePoint,
    #[error("time step {step} violates the RK4 stability bound {bound}")]
    StepTooLarge { step: f64, bound: f64 },
    #[error("L = {0} is not coprime to 12")]
    NotCoprime(u64),
    #[error("family component count {got} does not match vector length {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("invalid input: {0}")]
    Parse(String),
}
