//! Local stable manifolds of the invariant circle: orbit classification and
//! bisection slices, the power-series foliation and its growth probe, and
//! the bullet/cone geometry of ℛ near p∞ (backward invariance, distortion,
//! and the two-preorbit tension).

pub mod bullet;
pub mod classify;
pub mod distortion;
pub mod error;
pub mod field;
pub mod laurent;
pub mod probe;
pub mod series;
pub mod slice;
pub mod tension;

pub use bullet::{bullet_backward_invariance_check, in_bullet, BulletReport, ConeSpec};
pub use classify::{classify, classify_with, ClassifyOptions, OrbitClass};
pub use distortion::{distortion_check, distortion_check_with, DistortionKind, DistortionOptions, DistortionReport};
pub use error::ManifoldError;
pub use field::{GaussM31, GaussM61, SeriesField};
pub use laurent::Laurent;
pub use probe::{analyticity_probe, analyticity_probe_with, ProbeReport};
pub use series::{functional_residual, solve_series, solve_series_in, AnySeries, CircleSeries};
pub use slice::{bisect_slice, bisect_slice_with, psi_contour, SliceOptions, SliceSample};
pub use tension::{tension_experiment, TensionReport};
