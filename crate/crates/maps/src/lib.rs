//! The map catalog (the renormalization map ℛ, the example maps g, f, m and
//! the Newton map N) together with evaluation, orbits, Jacobians and
//! preimages.

pub mod catalog;
pub mod error;
pub mod eval;
mod linalg;
pub mod near_pinf;
pub mod preimage;
pub mod semiconj;
pub mod spec;

pub use error::MapError;
pub use eval::{eval, eval_in_chart, eval_scalar, jacobian, orbit, OrbitRecord, Terminal};
pub use linalg::poly_roots;
pub use preimage::{preimage_clusters, preimages, PreimageOptions};
pub use semiconj::semiconjugacy_residual;
pub use spec::{Attractor, AttractorKind, ChartFormula, ChartRole, MapSpec, SpecialKind, SpecialPoint};

use circlelab_core::{ChartId, ChartPoint};

/// Re-express a point in another chart declared by `map`.
pub fn to_chart(point: &ChartPoint, target: ChartId, map: &MapSpec) -> Result<ChartPoint, MapError> {
    Ok(circlelab_core::to_chart(point, target, &map.atlas)?)
}
