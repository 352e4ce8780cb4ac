//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or incompatible inputs (variable mismatch, zero polynomial
    /// where a nonzero one is required, non-squarefree input, ...).
    #[error("structural error: {0}")]
    Structural(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// Value outside the mathematical domain of an operation (negative
    /// radicand beyond rounding noise, nonpositive constant term, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated precondition does not hold at the call site.
    #[error("precondition not met: {0}")]
    Precondition(String),

    /// Retriable resource exhaustion (e.g. prime budget in the modular
    /// resultant backend).
    #[error("resource limit reached: {0}")]
    Resource(String),

    /// Configured time budget exceeded; partial output may exist.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A persisted artifact this operation depends on is missing.
    #[error("missing artifact: {0}")]
    MissingArtifact(String),

    /// Violation of an internal invariant; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
