use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by construction and verification routines.
///
/// Everything here is a caller-visible contract failure; numerical routines
/// that cannot fail on valid input return plain values.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {dim}² = {}", dim * dim)]
    NotSquare { dim: usize, len: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimTooLarge { dim: usize, max: usize },

    #[error("matrix dimension {dim} is not {d}·{d} for local dimension {d}")]
    NotBipartite { dim: usize, d: usize },

    #[error("matrix is not Hermitian: max |m - m†| = {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },

    #[error(
        "eigensolver did not converge: off-diagonal norm {off_norm:.3e} after {sweeps} sweeps"
    )]
    NoConvergence { off_norm: f64, sweeps: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("{0}")]
    Domain(String),

    #[error("invalid witness specification: {0}")]
    WitnessSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
