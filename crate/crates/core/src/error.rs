use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of a function (branch cut, zero radius, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A kernel or matrix entry evaluated to NaN or infinity.
    #[error("non-finite value: {0}")]
    NonFinite(String),
    /// An iterative method did not reach its tolerance.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// A search finished cleanly without finding what it looked for.
    #[error("not found: {0}")]
    NotFound(String),
    /// Dense eigendecomposition failed.
    #[error("eigensolver failure: {0}")]
    Eigen(String),
}

pub type Result<T> = std::result::Result<T, Error>;
