use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grade {grade} out of range for dimension {n}")]
    GradeOutOfRange { grade: usize, n: usize },

    #[error("metric is not symmetric positive definite: {0}")]
    InvalidMetric(String),

    #[error("invariant `{name}` violated (residual {residual:e})")]
    InvariantViolated { name: String, residual: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("dataset error: {0}")]
    Dataset(String),
}

impl Error {
    pub(crate) fn invariant(name: impl Into<String>, residual: f64) -> Self {
        Error::InvariantViolated { name: name.into(), residual }
    }

    /// True for errors that mean the inputs were malformed, as opposed to a
    /// computed result breaking a mathematical contract.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Contract(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
