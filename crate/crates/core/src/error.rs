use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not positive definite (pivot {pivot_index} = {pivot_value:e})")]
    NotPositiveDefinite { pivot_index: usize, pivot_value: f64 },

    #[error("eigensolver did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("pencil is degenerate: no direction of B survives deflation")]
    DegeneratePencil,

    #[error("insufficient data: {usable} usable points, need at least {required}")]
    InsufficientData { usable: usize, required: usize },

    #[error("optimizer restarts disagree: spread {spread:e} exceeds {tolerance:e}")]
    OptimizationStall { spread: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
