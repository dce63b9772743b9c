//! Crate-wide error type.

/// Errors produced by constructors, factorizations, and solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A matrix required to be symmetric (Hermitian) positive definite is not.
    #[error("matrix is not positive definite: {0}")]
    NotSpd(String),
    /// A matrix required to be positive semidefinite is not.
    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),
    /// A matrix that must be invertible is singular to working precision.
    #[error("singular matrix: {0}")]
    Singular(String),
    /// An iteration exhausted its budget without reaching its tolerance.
    #[error("failed to converge: {0}")]
    NoConvergence(String),
    /// A sketched matrix lost full column rank; the measured injectivity of
    /// the sketch on the original column space is attached for diagnosis.
    #[error("sketched matrix is rank deficient (injectivity alpha = {alpha:.3e})")]
    SketchDeficient { alpha: f64 },
    /// A file or configuration string could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// An experiment name not present in the registry.
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
