use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid dimensions ({0}, {1}): both sides must be >= 1")]
    InvalidDims(usize, usize),

    #[error("normalization violated: squared norm {0} differs from 1 by more than 1e-8")]
    Normalization(f64),

    #[error("hermiticity violated: max |rho - rho^dagger| = {0:e}")]
    NotHermitian(f64),

    #[error("trace violated: trace {0} differs from 1 by more than 1e-8")]
    Trace(f64),

    #[error("positivity violated: minimum eigenvalue {0:e} below -1e-10")]
    NotPositive(f64),

    #[error("invalid probability vector: {0}")]
    Probabilities(String),

    #[error("invalid rank {rank} for total dimension {dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("isometry columns are not orthonormal (deviation {0:e})")]
    NotIsometry(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("monotone domain violation: {0}")]
    Domain(String),

    #[error("unknown monotone `{0}` (expected one of: entropy, concurrence, avg_e)")]
    UnknownMonotone(String),

    #[error("Kraus operators are not complete (deviation {0:e})")]
    Incomplete(f64),
}
