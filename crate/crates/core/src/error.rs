use thiserror::Error;

/// Errors raised by the exact pipelines. Every failure is loud; nothing is approximated.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GermError {
    #[error("incompatible coefficient fields")]
    IncompatibleField,
    #[error("resultant of two zero polynomials is undefined")]
    UndefinedResultant,
    #[error("series is not invertible: {0}")]
    NonInvertibleSeries(String),
    #[error("capacity exceeded: {what} (cap {cap})")]
    Capacity { what: String, cap: usize },
    #[error("zero input: {0}")]
    ZeroInput(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("non-isolated singularity: common factor {0}")]
    NonIsolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, GermError>;

impl GermError {
    pub fn is_capacity(&self) -> bool {
        matches!(self, GermError::Capacity { .. })
    }
}
