use circlelab_maps::MapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LeeYangError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("invalid cylinder point (theta = {theta}, t = {t})")]
    InvalidPoint { theta: f64, t: f64 },
    #[error("image left the cylinder: ||z'| - 1| = {modulus_err:e}, t' = {t}")]
    Drift { modulus_err: f64, t: f64 },
    #[error("corrector window exhausted at t = {t} (theta0 = {theta0}); reduce t_max")]
    WindowExhausted { theta0: f64, t: f64 },
    #[error("{failed} of {total} leaves failed (more than 1%)")]
    TooManyLeafFailures { failed: usize, total: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
