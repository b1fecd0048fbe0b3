use thiserror::Error;

/// Errors produced while validating inputs or assembling discrimination
/// problems.
///
/// Validation failures carry the offending quantity so callers can report
/// how far the input was from acceptable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("density matrix trace must be 1 (got {0})")]
    BadTrace(f64),

    #[error("dimension mismatch ({0} vs {1})")]
    DimensionMismatch(usize, usize),

    #[error("priors must be non-negative and sum to 1 (got {0} and {1})")]
    BadPriors(f64, f64),

    #[error("vector must have unit norm (got norm {0})")]
    NotUnit(f64),

    #[error("cos(theta) must lie in [0, 1] (got {0})")]
    BadAngle(f64),

    #[error("kernels are not mutually orthogonal (largest overlap {0:.3e})")]
    NotOrthogonal(f64),

    #[error("pairing does not match the problem: {0}")]
    PairingMismatch(String),

    #[error("states are parallel up to phase (overlap {0})")]
    DegenerateStates(f64),

    #[error("at least one alternative state is required")]
    EmptyOtherSet,

    #[error("reduced dimension {0} exceeds the oracle limit {1}")]
    DimensionTooLarge(usize, usize),

    #[error("problem has not been reduced to the span of the supports")]
    NotReduced,

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
