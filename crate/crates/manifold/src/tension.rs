//! Two preorbits of one point x near p∞: a vertical one in K^v and a
//! horizontal one in K^h. The horizontal one leaves D_ε after n(k) steps with
//! its last point still at distance ≳ ε⁴ from p∞, while the vertical one,
//! followed for the same n(k) steps, ends within ~ε^{2^k} of p∞. Both ends
//! are n(k)-th preimages of the same point, so a continuous φ with
//! φ∘ℛ = φ⁴ and φ → 0 at p∞ cannot exist near p∞.
//!
//! Everything runs in extended-range arithmetic: for k = 6 the base point
//! sits about 10⁻⁴⁰⁰⁰ from p∞.

use crate::bullet::{in_bidisk, in_vertical_cone, near_preimages, ConeSpec, PREIMAGE_LN_RESIDUAL};
use crate::error::ManifoldError;
use circlelab_core::{Complex64, ExtC, Scalar};
use circlelab_maps::near_pinf::r_preimages_pq;
use serde::Serialize;

/// σ is squared at most this many times while searching.
pub const MAX_SQUARINGS: usize = 40;

type Pt = (ExtC, ExtC);

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LnPoint {
    pub ln_p: f64,
    pub ln_q: f64,
}

impl LnPoint {
    fn of(x: &Pt) -> Self {
        LnPoint { ln_p: x.0.ln_abs(), ln_q: x.1.ln_abs() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TensionReport {
    pub eps: f64,
    pub k: usize,
    pub gamma: u32,
    pub ln_sigma: f64,
    pub squarings: usize,
    /// Index of the last horizontal preimage inside D_ε.
    pub n_k: usize,
    /// v_0 = h_0 = x, then v_1..v_{n(k)}.
    pub vertical: Vec<LnPoint>,
    /// h_0..h_{n(k)}.
    pub horizontal: Vec<LnPoint>,
    /// |p(h_{n(k)})|.
    pub horizontal_proxy: f64,
    /// max(|p|, |q|) at v_{n(k)}.
    pub vertical_proxy: f64,
}

fn dist_ln(x: &Pt) -> f64 {
    x.0.ln_abs().max(x.1.ln_abs())
}

/// Preimages from the general near-p∞ solver (residual-filtered) together
/// with the fixed-point roots.
fn good_preimages(x: &Pt) -> Vec<Pt> {
    let mut out: Vec<Pt> =
        r_preimages_pq(&x.0, &x.1).into_iter().filter(|r| r.2 <= PREIMAGE_LN_RESIDUAL).map(|r| (r.0, r.1)).collect();
    out.extend(near_preimages(&x.0, &x.1));
    out
}

/// The preimage of x in D_ε satisfying `keep`, nearest p∞.
fn step(x: &Pt, eps: f64, keep: impl Fn(&Pt) -> bool) -> Option<Pt> {
    good_preimages(x)
        .into_iter()
        .filter(|y| in_bidisk(&y.0, &y.1, eps) && keep(y))
        .min_by(|a, b| dist_ln(a).total_cmp(&dist_ln(b)))
}

fn preorbit(x: &Pt, eps: f64, len: usize, keep: impl Fn(&Pt) -> bool + Copy) -> Result<Vec<Pt>, usize> {
    let mut out = vec![*x];
    for i in 1..=len {
        match step(&out[i - 1], eps, keep) {
            Some(y) => out.push(y),
            None => return Err(i),
        }
    }
    Ok(out)
}

/// x = (½ s^γ, s) with s = σ/2: inside D_σ and outside B_γ.
fn base_point(ln_sigma: f64, gamma: u32) -> Pt {
    let s = ln_to_ext(ln_sigma - std::f64::consts::LN_2);
    let p = ExtC::new(Complex64::new(0.5, 0.0)) * s.powu(gamma);
    (p, s)
}

fn ln_to_ext(l: f64) -> ExtC {
    let e = (l / std::f64::consts::LN_2).floor();
    let m = (l - e * std::f64::consts::LN_2).exp();
    ExtC::from_parts(Complex64::new(m, 0.0), e as i64)
}

pub fn tension_experiment(eps: f64, k: usize) -> Result<TensionReport, ManifoldError> {
    if !(eps > 0.0 && eps <= 0.1) || k == 0 {
        return Err(ManifoldError::InvalidParams(format!("need 0 < eps <= 0.1 and k >= 1, got {eps}, {k}")));
    }
    let gamma = k as u32 + 3;
    let h_cone = ConeSpec::horizontal();
    let vert = |y: &Pt| in_vertical_cone(&y.0, &y.1);
    let horiz = |y: &Pt| h_cone.contains(&y.0, &y.1);

    let mut ln_sigma = eps.ln();
    let mut found = None;
    let mut last_fail = ("vertical", 1);
    for squarings in 0..=MAX_SQUARINGS {
        let x = base_point(ln_sigma, gamma);
        match (preorbit(&x, eps, k, vert), preorbit(&x, eps, k, horiz)) {
            (Ok(_), Ok(h)) => {
                found = Some((squarings, x, h));
                break;
            }
            (Err(i), _) => last_fail = ("vertical", i),
            (_, Err(i)) => last_fail = ("horizontal", i),
        }
        ln_sigma *= 2.0;
    }
    let Some((squarings, x, mut h)) = found else {
        return Err(ManifoldError::PreimageNotFound { cone: last_fail.0, step: last_fail.1 });
    };

    // extend the horizontal preorbit while it stays in K^h ∩ D_ε
    while let Some(y) = step(h.last().unwrap(), eps, horiz) {
        h.push(y);
    }
    let n_k = h.len() - 1;
    // the vertical preorbit may leave K^v after k steps
    let mut v =
        preorbit(&x, eps, k, vert).map_err(|i| ManifoldError::PreimageNotFound { cone: "vertical", step: i })?;
    while v.len() <= n_k {
        let i = v.len();
        let y = step(v.last().unwrap(), eps, |_| true)
            .ok_or(ManifoldError::PreimageNotFound { cone: "vertical", step: i })?;
        v.push(y);
    }
    let hn = &h[n_k];
    let vn = &v[n_k];
    Ok(TensionReport {
        eps,
        k,
        gamma,
        ln_sigma,
        squarings,
        n_k,
        vertical: v.iter().map(LnPoint::of).collect(),
        horizontal: h.iter().map(LnPoint::of).collect(),
        horizontal_proxy: hn.0.ln_abs().exp(),
        vertical_proxy: dist_ln(vn).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_round_trip() {
        for l in [-1.0, -300.0, -1e5] {
            assert!((ln_to_ext(l).ln_abs() - l).abs() < 1e-9 * l.abs());
        }
    }

    #[test]
    fn fixed_point_roots_map_back() {
        let r = circlelab_maps::catalog::cached("R").unwrap();
        let f = &r.formula(circlelab_core::ChartId::PqAtInfinity).unwrap().formula;
        let x = (ExtC::new(Complex64::new(3e-4, 1e-4)), ExtC::new(Complex64::new(-2e-3, 1e-3)));
        let pre = near_preimages(&x.0, &x.1);
        assert_eq!(pre.len(), 8);
        let rel = |a: ExtC, b: ExtC| (a - b).ln_abs() - b.ln_abs();
        for y in pre {
            let (p, q) = f.eval_scalar(&y.0, &y.1);
            assert!(rel(p, x.0) < -20.0 && rel(q, x.1) < -20.0);
        }
    }

    #[test]
    fn k2_builds_both_preorbits() {
        let r = tension_experiment(0.1, 2).unwrap();
        assert!(r.n_k >= 2);
        assert_eq!(r.vertical.len(), r.n_k + 1);
        assert!(r.horizontal_proxy < 0.1 && r.vertical_proxy < 0.1);
    }
}
