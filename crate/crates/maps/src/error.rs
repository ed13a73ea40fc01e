use circlelab_core::{ChartId, CoreError};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("point is within {margin:e} of the indeterminacy point {label}")]
    Indeterminacy { label: String, margin: f64 },
    #[error("denominator underflow in every chart (|den| = {0:.3e})")]
    DenominatorUnderflow(f64),
    #[error("map {map} has no formula in chart {chart}")]
    UnknownChart { map: String, chart: ChartId },
    #[error("unknown map '{0}'")]
    UnknownMap(String),
    #[error("invalid map specification: {0}")]
    InvalidSpec(String),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("degenerate target: preimages {sep:.3e} apart (critical value?)")]
    DegenerateTarget { sep: f64 },
}
