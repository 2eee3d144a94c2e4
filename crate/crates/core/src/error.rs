//! Error type shared across the crate.

use thiserror::Error;

pub type CoreResult<T> = Result<T, CoreError>;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("operator is not Hermitian (max |M - M^dag| entry = {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("empty operator list")]
    EmptyInput,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("reference state has zero raw purity; not extremal for this algebra")]
    InvalidReference,

    #[error("CP certificate violated: {0}")]
    CertificateViolation(String),

    #[error("operation unsupported for algebra '{algebra}': {reason}")]
    UnsupportedAlgebra { algebra: String, reason: String },

    #[error("dense materialization too large: {elements} operators of dimension {dim}")]
    TooLarge { elements: usize, dim: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}
