//! Co-dimension-1 Böttcher functions: the telescoping product for φ with
//! its guard and tail bound, ψ = log|φ|, forward-invariant regions and the
//! fiber-averaging extension for ℛ.

pub mod averaging;
pub mod error;
pub mod phi;
pub mod region;

pub use averaging::averaging_phi;
pub use error::BottcherError;
pub use phi::{guard_value, line_chart, phi, phi_with, psi, psi_with, BottcherResult, PhiOptions, PsiResult};
pub use region::{in_omega, sample_omega, search_region, validate_region, RegionParams, ValidationReport};
