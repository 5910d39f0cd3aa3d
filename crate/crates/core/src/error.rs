use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("signal {signal} has zero marginal probability")]
    ZeroMarginal { signal: usize },

    #[error("prediction matrix is not Bayes-consistent (symmetry residual {residual:e})")]
    InconsistentPrediction { residual: f64 },

    #[error("no reviewer reported signal {signal}")]
    MissingSignal { signal: usize },

    #[error("noise matrix is not in the (1-lambda)I + lambda*B family")]
    NotInFamily,

    #[error("joint matrix determinant {det:e} is not positive")]
    NonPositiveDeterminant { det: f64 },

    #[error("joint matrix is singular")]
    SingularJoint,

    #[error("expected score of paper A ({a}) must be strictly below paper B ({b})")]
    UnorderedPair { a: f64, b: f64 },
}

pub type Result<T> = std::result::Result<T, CalibrationError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CalibrationError {
    CalibrationError::Invalid(msg.into())
}
