//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by tensor, network, decomposition and layer operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Index dimensions are inconsistent with the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Index labels collide or reference a label that does not exist.
    #[error("label error: {0}")]
    Label(String),

    /// The matrix-factorization backend failed to converge.
    #[error("factorization failed: {0}")]
    Factorization(String),

    /// A numeric invariant was violated (NaN/Inf, overflow, empty spectrum).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A tensor network is structurally invalid.
    #[error("network error: {0}")]
    Network(String),

    /// A contraction plan is invalid for the network it is applied to.
    #[error("plan error: {0}")]
    Plan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
