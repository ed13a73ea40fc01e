use crate::chart::ChartId;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("no transition declared from {from} to {to}")]
    UndeclaredTransition { from: ChartId, to: ChartId },
    #[error("point lies on the singular locus of the {from} -> {to} transition (|den| = {den:.3e})")]
    SingularLocus { from: ChartId, to: ChartId, den: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("exact mode is not available for {0}")]
    ExactUnsupported(String),
    #[error("working_digits must be at least 15 (got {0})")]
    InvalidPrecision(u32),
    #[error("denominator polynomial is identically zero")]
    ZeroDenominator,
    #[error("numerator and denominator share a common factor")]
    NotCoprime,
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}
