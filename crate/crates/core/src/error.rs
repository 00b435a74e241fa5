//! Error types shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by geometry, quadrature and solver routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied parameter violates a precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input lies outside the mathematical domain of the operation
    /// (e.g. projecting the origin to a sphere).
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or lost its bracket.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A bracketing search found no sign change; the payload carries the
    /// indicator values observed at both endpoints.
    #[error("bracket error: no sign change in [{lo}, {hi}] (indicator lo={lo_ok}, hi={hi_ok})")]
    Bracket {
        lo: f64,
        hi: f64,
        lo_ok: bool,
        hi_ok: bool,
    },

    /// The requested quantity is below the quadrature noise floor, so a
    /// relative statement about it would be meaningless.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
