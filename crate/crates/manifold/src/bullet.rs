//! Bullet regions B_{γ,c} = {|p| ≥ c|q|^γ} near p∞ in the (p, q) chart of ℛ,
//! the cones K^h = B_{1,1} = {|q| ≤ |p|} and K^v = {|q| ≥ |p|}, and a Monte
//! Carlo check that preimages of B_γ inside the bidisk D_ε stay in B_γ.

use crate::error::ManifoldError;
use circlelab_core::{ChartId, ChartPoint, Complex64, CounterRng, Scalar};
use circlelab_maps::near_pinf::r_preimages_pq;
use circlelab_maps::{catalog, preimage_clusters, to_chart};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Near-p∞ preimages with a larger ln relative residual are discarded.
pub const PREIMAGE_LN_RESIDUAL: f64 = -23.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub gamma: u32,
    pub c: f64,
}

impl ConeSpec {
    pub fn new(gamma: u32, c: f64) -> Result<Self, ManifoldError> {
        if gamma < 1 || !(c > 0.0) {
            return Err(ManifoldError::InvalidParams(format!("need gamma >= 1 and c > 0, got {gamma}, {c}")));
        }
        Ok(ConeSpec { gamma, c })
    }

    pub fn bullet(gamma: u32) -> Self {
        ConeSpec { gamma: gamma.max(1), c: 1.0 }
    }

    /// K^h.
    pub fn horizontal() -> Self {
        ConeSpec { gamma: 1, c: 1.0 }
    }

    /// |p| ≥ c|q|^γ on the log scale, so it also works far below f64 range.
    pub fn contains_ln(&self, ln_p: f64, ln_q: f64) -> bool {
        ln_q == f64::NEG_INFINITY || ln_p >= self.c.ln() + self.gamma as f64 * ln_q
    }

    pub fn contains<S: Scalar>(&self, p: &S, q: &S) -> bool {
        self.contains_ln(p.ln_abs(), q.ln_abs())
    }
}

/// x must be in the pq chart.
pub fn in_bullet(x: &ChartPoint, cone: &ConeSpec) -> Result<bool, ManifoldError> {
    if x.chart != ChartId::PqAtInfinity {
        return Err(ManifoldError::InvalidParams(format!("in_bullet needs a pq point, got {}", x.chart)));
    }
    Ok(cone.contains(&x.c1, &x.c2))
}

/// K^v = {|q| ≥ |p|}.
pub fn in_vertical_cone<S: Scalar>(p: &S, q: &S) -> bool {
    q.ln_abs() >= p.ln_abs()
}

/// Both coordinates of modulus below eps.
pub fn in_bidisk<S: Scalar>(p: &S, q: &S, eps: f64) -> bool {
    let l = eps.ln();
    p.ln_abs() < l && q.ln_abs() < l
}

/// Relative residual (ln scale) of the q-equation q²(1+(p+q)²)² = Q(1+q²)².
fn q_residual<S: Scalar>(p: &S, q: &S, tq: &S) -> f64 {
    let one = p.lift(Complex64::new(1.0, 0.0));
    let (p, q) = (p.clone(), q.clone());
    let u = p + q.clone();
    let g = one.clone() + u.clone() * u;
    let e = one + q.clone() * q.clone();
    let lhs = q.clone() * q * g.clone() * g;
    let rhs = tq.clone() * e.clone() * e;
    let scale = lhs.ln_abs().max(rhs.ln_abs());
    (lhs - rhs).ln_abs() - scale
}

fn rel_change<S: Scalar>(a: &S, b: &S) -> f64 {
    let d = (a.clone() - b.clone()).ln_abs();
    if d == f64::NEG_INFINITY {
        return d;
    }
    d - a.ln_abs().max(b.ln_abs())
}

/// The eight preimages of x near p∞. The system factors into
///   p(p + 2q) = ±√P (1 + q²),   q(1 + (p+q)²) = ±√Q (1 + q²),
/// which near p∞ is a contraction in q; p is taken as either root of the
/// quadratic in the cancellation-free form. The K^h roots p ≈ −2q carry a
/// correction far below one ulp of q, which is why a Newton step on the
/// squared system cannot find them.
pub fn near_preimages<S: Scalar>(tp: &S, tq: &S) -> Vec<(S, S)> {
    let one = tp.lift(Complex64::new(1.0, 0.0));
    let (rp, rq) = (tp.sqrt(), tq.sqrt());
    let mut out = Vec::with_capacity(8);
    for sq in [rq.clone(), -rq] {
        for sp in [rp.clone(), -rp.clone()] {
            for big in [true, false] {
                let mut q = sq.clone();
                let mut p = tp.lift(Complex64::new(0.0, 0.0));
                let mut converged = false;
                for _ in 0..200 {
                    let e = one.clone() + q.clone() * q.clone();
                    let s = sp.clone() * e.clone();
                    let r = (q.clone() * q.clone() + s.clone()).sqrt();
                    let (a, b) = (-q.clone() - r.clone(), -q.clone() + r);
                    let large = if a.ln_abs() >= b.ln_abs() { a } else { b };
                    let np = if big || large.is_zero() { large } else { -s / large };
                    let u = np.clone() + q.clone();
                    let nq = sq.clone() * e / (one.clone() + u.clone() * u);
                    let done = rel_change(&np, &p) < -34.0 && rel_change(&nq, &q) < -34.0;
                    p = np;
                    q = nq;
                    if done {
                        converged = true;
                        break;
                    }
                }
                if converged && q_residual(&p, &q, tq) <= PREIMAGE_LN_RESIDUAL {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

fn same(a: &(Complex64, Complex64), b: &(Complex64, Complex64)) -> bool {
    let s = a.0.norm().max(a.1.norm()).max(b.0.norm()).max(b.1.norm());
    (a.0 - b.0).norm().max((a.1 - b.1).norm()) <= 1e-9 * s
}

/// All preimages of (P, Q) under ℛ in the pq chart: the fixed-point roots
/// and the near-p∞ Newton solver, falling back to the general solver
/// (clustered) when together they do not give eight distinct roots.
pub fn r_preimages(tp: Complex64, tq: Complex64) -> Result<Vec<(Complex64, Complex64)>, ManifoldError> {
    let newton = r_preimages_pq(&tp, &tq).into_iter().filter(|r| r.2 <= PREIMAGE_LN_RESIDUAL).map(|r| (r.0, r.1));
    let mut good: Vec<(Complex64, Complex64)> = Vec::new();
    for y in near_preimages(&tp, &tq).into_iter().chain(newton) {
        if !good.iter().any(|g| same(g, &y)) {
            good.push(y);
        }
    }
    if good.len() == 8 {
        return Ok(good);
    }
    let r = catalog::cached("R")?;
    let cl = preimage_clusters(r, &ChartPoint::new(ChartId::PqAtInfinity, tp, tq))?;
    let mut out = Vec::new();
    for (x, _) in cl {
        if let Ok(y) = to_chart(&x, ChartId::PqAtInfinity, r) {
            out.push((y.c1, y.c2));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct BulletViolation {
    pub target: (Complex64, Complex64),
    pub preimage: (Complex64, Complex64),
}

#[derive(Debug, Clone, Serialize)]
pub struct BulletReport {
    pub gamma: u32,
    pub eps: f64,
    pub samples: usize,
    /// Preimages that landed in D_ε (the only ones the inclusion is about).
    pub preimages_in_disc: usize,
    pub violations: Vec<BulletViolation>,
    /// Targets whose preimages could not be computed.
    pub failures: usize,
}

impl BulletReport {
    pub fn success(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Decades spanned by the log-uniform target moduli.
pub const BULLET_LOG_SPAN: f64 = 12.0;

/// A point of D_ε ∩ B_γ by rejection, both moduli log-uniform over
/// `BULLET_LOG_SPAN` decades below ε. Area-uniform targets almost never have
/// a preimage back in D_ε (|q'| ≈ |Q|^{1/2}), which would make the check
/// vacuous.
fn sample_bullet(rng: &CounterRng, i: u64, cone: &ConeSpec, eps: f64) -> (Complex64, Complex64) {
    let mut g = rng.stream(i);
    let mut draw = || {
        let r = eps * 10f64.powf(-BULLET_LOG_SPAN * g.gen::<f64>());
        Complex64::from_polar(r, std::f64::consts::TAU * g.gen::<f64>())
    };
    loop {
        let (p, q) = (draw(), draw());
        if cone.contains(&p, &q) {
            return (p, q);
        }
    }
}

/// ℛ^{-1}(B_γ) ∩ D_ε ⊂ B_γ, tested on preimages of random points of B_γ ∩ D_ε.
pub fn bullet_backward_invariance_check(
    gamma: u32,
    eps: f64,
    n_samples: usize,
    seed: u64,
) -> Result<BulletReport, ManifoldError> {
    let cone = ConeSpec::new(gamma, 1.0)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ManifoldError::InvalidParams(format!("eps must lie in (0, 1), got {eps}")));
    }
    let rng = CounterRng::new(seed);
    let per: Vec<Result<(usize, Vec<BulletViolation>), ManifoldError>> = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let t = sample_bullet(&rng, i, &cone, eps);
            let pre = r_preimages(t.0, t.1)?;
            let inside: Vec<_> = pre.into_iter().filter(|(p, q)| in_bidisk(p, q, eps)).collect();
            let bad = inside
                .iter()
                .filter(|(p, q)| !cone.contains(p, q))
                .map(|&x| BulletViolation { target: t, preimage: x })
                .collect();
            Ok((inside.len(), bad))
        })
        .collect();
    let mut report =
        BulletReport { gamma, eps, samples: n_samples, preimages_in_disc: 0, violations: Vec::new(), failures: 0 };
    for r in per {
        match r {
            Ok((n, bad)) => {
                report.preimages_in_disc += n;
                report.violations.extend(bad);
            }
            Err(_) => report.failures += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use circlelab_core::c64;

    #[test]
    fn bullet_membership_examples() {
        let pt = |p, q| ChartPoint::real(ChartId::PqAtInfinity, p, q);
        assert!(!in_bullet(&pt(0.01, 0.1), &ConeSpec::horizontal()).unwrap());
        assert!(in_bullet(&pt(0.1, 0.1), &ConeSpec::horizontal()).unwrap());
        assert!(in_bullet(&pt(0.01, 0.1), &ConeSpec::bullet(3)).unwrap());
        assert!(ConeSpec::new(0, 1.0).is_err());
        assert!(in_bullet(&ChartPoint::real(ChartId::PhysicalZt, 0.1, 0.1), &ConeSpec::horizontal()).is_err());
    }

    #[test]
    fn line_targets_keep_line_preimages() {
        // on L₀ the preimages of (P, 0) include (±P^{1/4}·unit, 0)
        let pre = r_preimages(c64(0.0016, 0.0), c64(0.0, 0.0)).unwrap();
        let on_line: Vec<_> = pre.iter().filter(|x| x.1.norm() < 1e-6).collect();
        assert!(!on_line.is_empty(), "{pre:?}");
        for x in on_line {
            assert!(ConeSpec::bullet(3).contains(&x.0, &x.1));
            assert!((x.0.norm() - 0.2).abs() < 1e-6);
        }
    }
}
