//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A series or iteration could not reach its accuracy contract.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// Malformed or inconsistent input data.
    #[error("invalid input: {0}")]
    Input(String),
    /// A non-finite value appeared during evaluation.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// An unsupported combination of options.
    #[error("configuration error: {0}")]
    Config(String),
    /// The operation does not apply to the supplied problem.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A constraint functional has a vanishing first variation.
    #[error("degenerate constraint: {0}")]
    Degenerate(String),
    /// Direct minimization detected that the functional is not bounded below.
    #[error("coercivity failure: {0}")]
    Coercivity(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
