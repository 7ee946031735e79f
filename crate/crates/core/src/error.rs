//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, certification, and search routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A state vector's norm is too far from 1 to accept as a pure state.
    #[error("state norm {norm} deviates from 1 by more than {tol}")]
    NormViolation { norm: f64, tol: f64 },

    /// Shapes or declared dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A requested matrix would exceed the configured size cap.
    #[error("matrix side {requested} exceeds the configured size cap {cap}")]
    SizeCapExceeded { requested: usize, cap: usize },

    /// An operation that needs a bipartite operator got something else.
    #[error("operator is not bipartite: factors are {0:?}")]
    NotBipartite(Vec<usize>),

    /// A spectral routine was handed a matrix that is not Hermitian.
    #[error("operator is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// Tolerance parameters outside (0, 1).
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    /// State-set weights that are not positive or do not sum to 1.
    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// A search configuration that fails validation.
    #[error("invalid search config: {0}")]
    InvalidConfig(String),

    /// Exact integer arithmetic left the representable range.
    #[error("integer overflow in exact binomial arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
