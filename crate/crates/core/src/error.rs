use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A product would exceed the representable polynomial degree.
    #[error("polynomial degree {degree} exceeds the representable bound {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("invalid breakpoints: {0}")]
    Breakpoints(String),

    /// Cholesky factorization met a non-positive pivot.
    #[error("matrix is not positive definite: pivot {pivot} = {value:e}")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
