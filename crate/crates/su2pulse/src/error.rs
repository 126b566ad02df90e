//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A system needs at least two levels.
    #[error("invalid dimension: need at least 2 levels, got {levels}")]
    InvalidDimension { levels: usize },

    /// Factorial tables in the D-matrix lift are kept in log space and are
    /// sized for j ≤ 25 (51 levels).
    #[error("spin too large: {levels} levels exceeds the supported maximum of {max} (j = 25)")]
    SpinTooLarge { levels: usize, max: usize },

    /// Non-finite or otherwise unusable numeric input.
    #[error("numeric domain error: {what}")]
    NumericDomain { what: String },

    /// A precondition on an argument was violated.
    #[error("invalid input: {what}")]
    InvalidInput { what: String },

    /// A scalar argument fell outside its documented interval.
    #[error("{what} = {value} out of range [{min}, {max}]")]
    OutOfRange {
        what: String,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Vector/matrix dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The Hermitian eigensolver failed to converge.
    #[error("eigendecomposition failed: {what}")]
    Eigendecomposition { what: String },

    /// No multi-start of the phase solver reached the residual tolerance.
    #[error("phase solver did not converge for {kind} M={count}; best residual {best_residual:e}")]
    SolverDidNotConverge {
        kind: String,
        count: usize,
        best_residual: f64,
    },

    /// The polynomial root finder stalled; carries the worst relative residual.
    #[error("root finder did not converge; worst relative residual {residual:e}")]
    RootsDidNotConverge { residual: f64 },
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidInput { what: what.into() }
    }

    pub(crate) fn numeric(what: impl Into<String>) -> Self {
        Error::NumericDomain { what: what.into() }
    }
}
