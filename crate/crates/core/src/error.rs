//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension {0} is not supported here")]
    UnsupportedDimension(usize),

    #[error("value is not finite")]
    NonFinite,

    #[error("matrix is not unitary (max deviation {max_dev:.3e})")]
    NotUnitary { max_dev: f64 },

    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("state is not normalized (norm deviation {dev:.3e})")]
    NotNormalized { dev: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid level indices m={m}, n={n} for dimension {dim}")]
    BadLevels { m: usize, n: usize, dim: usize },

    #[error("invalid permutation image {0:?}")]
    BadPermutation(Vec<usize>),

    #[error("linear system is rank deficient (pivot {pivot:.3e})")]
    RankDeficient { pivot: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
