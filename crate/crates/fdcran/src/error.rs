//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Mathematical precondition violated (dimension mismatch, non-Hermitian
    /// input, value outside a function's domain).
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration field rejected by validation.
    #[error("config error: {field}: {message}")]
    Config { field: String, message: String },

    /// A subproblem could not be solved (no strictly feasible point, or an
    /// input combination the drivers should have prevented).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Internal invariant broken; indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("version mismatch: sidecar written by {found}, this build is {expected}")]
    VersionMismatch { found: String, expected: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
