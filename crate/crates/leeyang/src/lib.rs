//! Lee-Yang cylinder C = {|z| = 1, t ∈ [0, 1]} of the Migdal-Kadanoff map ℛ:
//! pulling zero sets back level by level, holonomy along the central
//! foliation, and the densities μ_t it pushes Lebesgue measure to.

pub mod cylinder;
pub mod density;
pub mod error;
pub mod holonomy;
pub mod zeros;

pub use cylinder::{
    circ_diff, cyl_eval, cyl_orbit_big, cyl_step, invariance_check, lift_step, wrap_angle, CylinderPoint,
    InvarianceReport,
};
pub use density::{density, density_run, histogram_masses, ks_uniform, tv_distance, DensityHistogram, DensityRun};
pub use error::LeeYangError;
pub use holonomy::{
    circular_order_preserved, holonomy_leaf, holonomy_leaf_with, HolonomyOptions, Leaf, VALIDATED_T_MAX,
};
pub use zeros::{
    pullback_levels, pullback_zeros, pullback_zeros_with, seed_curve, verify_zero_set, zeros_on_circle,
    PullbackOptions, VerifyReport, ZeroSet,
};
