use circlelab_bottcher::BottcherError;
use circlelab_core::CoreError;
use circlelab_maps::MapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifoldError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Bottcher(#[from] BottcherError),
    #[error("bracket failure at theta = {theta}: both ends classify as {class} (fiber too large?)")]
    BracketFailure { theta: f64, class: String },
    #[error("undecided orbit at radius {radius} (theta = {theta}) even with budget {budget}")]
    Undecided { theta: f64, radius: f64, budget: usize },
    #[error("map {0} is not a polynomial skew product in normal form")]
    NotSkew(String),
    #[error("order {order} exceeds the exact-mode cap {cap}")]
    OrderOverflow { order: usize, cap: usize },
    #[error("map coefficient {0} has no image in the chosen field")]
    Coefficient(String),
    #[error("no surviving samples after {attempts} attempts (region too aggressive)")]
    NoSurvivors { attempts: usize },
    #[error("no {cone} preimage inside the disc at step {step} (retry with smaller sigma)")]
    PreimageNotFound { cone: &'static str, step: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
