//! φ extended to ℛ^n-images by averaging over the fiber:
//! φ(x) = 8^{-n} Σ φ(y_i)^{4^n} over the 8^n points of ℛ^{-n}{x}.

use crate::error::BottcherError;
use crate::phi::{phi_with, BottcherResult, PhiOptions};
use crate::region::{in_omega, RegionParams};
use circlelab_core::{ChartPoint, Complex64};
use circlelab_maps::catalog::cached;
use circlelab_maps::preimages;

pub fn averaging_phi(x: &ChartPoint, n: usize, base: &RegionParams, tol: f64) -> Result<BottcherResult, BottcherError> {
    let r = cached("R")?;
    let opts = PhiOptions { experimental: true, region: None };
    let n_max = 200;
    if n == 0 {
        return phi_with(r, x, tol, n_max, &opts);
    }
    let mut level = vec![*x];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * 8);
        for y in &level {
            next.extend(preimages(r, y)?);
        }
        level = next;
    }
    let pow = 4u32.pow(n as u32);
    let inner_tol = tol / pow as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut terms = 0;
    for (i, y) in level.iter().enumerate() {
        if !in_omega(r, y, base) {
            return Err(BottcherError::PreimageEscaped { level: n, index: i });
        }
        let v = phi_with(r, y, inner_tol, n_max, &opts)?;
        sum += v.value.powu(pow);
        let m = v.value.norm() + v.truncation_bound;
        bound += pow as f64 * m.powi(pow as i32 - 1) * v.truncation_bound;
        terms = terms.max(v.terms);
    }
    let k = level.len() as f64;
    Ok(BottcherResult { value: sum / k, truncation_bound: bound / k, terms })
}
