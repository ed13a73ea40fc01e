use circlelab_core::CoreError;
use circlelab_maps::MapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BottcherError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("guard violated at iterate {step}: |u| = {value:.3e} >= 1/2 (point outside the valid region)")]
    GuardViolation { step: usize, value: f64 },
    #[error("tail bound {bound:.3e} still above tolerance after {n_max} iterates")]
    NotConverged { n_max: usize, bound: f64 },
    #[error("orbit left the region at iterate {step}")]
    OrbitLeftRegion { step: usize },
    #[error("map {name} has a = {a} < b = {b}; phi needs the experimental flag")]
    RequiresExperimental { name: String, a: u32, b: u32 },
    #[error("no valid region found down to the floor {floor:e}")]
    NoValidRegion { floor: f64 },
    #[error("level-{level} preimage #{index} lies outside the base region")]
    PreimageEscaped { level: usize, index: usize },
    #[error("invalid region parameters: {0}")]
    InvalidParams(String),
    #[error("point cannot be expressed in a normal-form chart of {0}")]
    NoLineChart(String),
}
