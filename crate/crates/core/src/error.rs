use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A measure violates one of the existence conditions of the process.
    #[error("existence condition violated: {0}")]
    Existence(String),
    /// A family was constructed with invalid parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// The configuration is outside what the simulator supports.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    /// An operation was called with inconsistent inputs.
    #[error("usage error: {0}")]
    Usage(String),
    /// A precondition of an asymptotic result does not hold.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    /// An experiment precondition failed; names the failed integral.
    #[error("configuration error: {0}")]
    Configuration(String),
    /// Numerical failure (factorization, non-convergence).
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Canonical text form could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
