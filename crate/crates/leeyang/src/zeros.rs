//! Lee-Yang zeros by pullback. Level n + 1 is the set of cylinder preimages
//! of level n; the default seed is the vertical segment {θ = π, t ∈ [0, 1]}
//! (the true Z₀ of the lattice is not used).

use crate::cylinder::{circ_diff, cyl_orbit_big, cyl_step, lift_step, wrap_angle, CylinderPoint};
use crate::error::LeeYangError;
use circlelab_core::CounterRng;
use circlelab_maps::{catalog, preimages};
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

/// Tolerance for accepting a preimage as a cylinder point.
pub const ON_CYLINDER_TOL: f64 = 1e-8;
/// A polished preimage must map to its target within this.
pub const STEP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSet {
    pub level: usize,
    pub points: Vec<CylinderPoint>,
    pub seed_id: String,
    /// Targets whose preimages could not be computed (skipped).
    pub failures: usize,
    /// Preimages discarded because they did not map back to their target.
    #[serde(default)]
    pub rejected: usize,
    /// Points dropped by subsampling at this level.
    pub dropped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullbackOptions {
    /// Keep at most this many points per level (uniform random subset).
    pub cap: Option<usize>,
    pub rng_seed: u64,
}

impl Default for PullbackOptions {
    fn default() -> Self {
        PullbackOptions { cap: Some(50_000), rng_seed: 1 }
    }
}

/// The segment {θ = theta, t ∈ [0, 1]} at midpoints t = (k + ½)/n.
pub fn seed_curve(theta: f64, n_points: usize) -> ZeroSet {
    let points = (0..n_points)
        .map(|k| CylinderPoint { theta: wrap_angle(theta), t: (k as f64 + 0.5) / n_points as f64 })
        .collect();
    ZeroSet { level: 0, points, seed_id: format!("theta={theta}"), failures: 0, rejected: 0, dropped: 0 }
}

/// Cylinder preimages of x, and how many failed the one-step check.
fn cylinder_preimages(x: &CylinderPoint) -> Result<(Vec<CylinderPoint>, usize), LeeYangError> {
    let r = catalog::cached("R")?;
    let pre = preimages(r, &x.to_chart_point())?;
    let (good, bad): (Vec<CylinderPoint>, Vec<CylinderPoint>) = pre
        .into_iter()
        .filter(|y| {
            (y.c1.norm() - 1.0).abs() <= ON_CYLINDER_TOL
                && y.c2.im.abs() <= ON_CYLINDER_TOL
                && y.c2.re >= -ON_CYLINDER_TOL
                && y.c2.re <= 1.0 + ON_CYLINDER_TOL
        })
        .map(|y| polish(CylinderPoint { theta: wrap_angle(y.c1.arg()), t: y.c2.re.clamp(0.0, 1.0) }, x))
        .partition(|y| {
            let r = cyl_residual((y.theta, y.t), x);
            r.0.abs().max(r.1.abs()) <= STEP_TOL
        });
    Ok((good, bad.len()))
}

fn cyl_residual(y: (f64, f64), x: &CylinderPoint) -> (f64, f64) {
    let (th, t) = lift_step(y.0, y.1);
    (circ_diff(th, x.theta), t - x.t)
}

/// Newton on the real cylinder map (θ, t) ↦ (θ′, t′), finite-difference
/// Jacobian. Each level multiplies angle errors by about 4, so the complex
/// preimages (good to ~1e-11) are not accurate enough for deep levels.
fn polish(y: CylinderPoint, x: &CylinderPoint) -> CylinderPoint {
    let norm = |r: (f64, f64)| r.0.abs().max(r.1.abs());
    let mut cur = (y.theta, y.t);
    let mut res = cyl_residual(cur, x);
    for _ in 0..4 {
        if norm(res) < 1e-15 {
            break;
        }
        let h = 1e-7;
        let d = |a: (f64, f64), b: (f64, f64)| {
            let (ra, rb) = (cyl_residual(a, x), cyl_residual(b, x));
            ((ra.0 - rb.0) / (2.0 * h), (ra.1 - rb.1) / (2.0 * h))
        };
        let jt = d((cur.0 + h, cur.1), (cur.0 - h, cur.1));
        // one-sided in t at the ends of the cylinder
        let (lo, hi) = ((cur.1 - h).max(0.0), (cur.1 + h).min(1.0));
        let js = {
            let (ra, rb) = (cyl_residual((cur.0, hi), x), cyl_residual((cur.0, lo), x));
            ((ra.0 - rb.0) / (hi - lo), (ra.1 - rb.1) / (hi - lo))
        };
        let det = jt.0 * js.1 - js.0 * jt.1;
        if !(det.abs() > 1e-300) {
            break;
        }
        let dth = (res.0 * js.1 - js.0 * res.1) / det;
        let dt = (jt.0 * res.1 - res.0 * jt.1) / det;
        let next = (cur.0 - dth, (cur.1 - dt).clamp(0.0, 1.0));
        let r = cyl_residual(next, x);
        if norm(r) >= norm(res) {
            break;
        }
        cur = next;
        res = r;
    }
    CylinderPoint { theta: wrap_angle(cur.0), t: cur.1 }
}

pub fn pullback_zeros(zs: &ZeroSet) -> Result<ZeroSet, LeeYangError> {
    pullback_zeros_with(zs, &PullbackOptions::default())
}

pub fn pullback_zeros_with(zs: &ZeroSet, opts: &PullbackOptions) -> Result<ZeroSet, LeeYangError> {
    let found: Vec<Option<(Vec<CylinderPoint>, usize)>> =
        zs.points.par_iter().map(|x| cylinder_preimages(x).ok()).collect();
    let failures = found.iter().filter(|f| f.is_none()).count();
    let rejected = found.iter().flatten().map(|f| f.1).sum();
    let mut points: Vec<CylinderPoint> = found.into_iter().flatten().flat_map(|f| f.0).collect();
    let mut dropped = 0;
    let level = zs.level + 1;
    if let Some(cap) = opts.cap {
        if points.len() > cap {
            let mut g = CounterRng::new(opts.rng_seed).stream(level as u64);
            let mut keep = sample(&mut g, points.len(), cap).into_vec();
            keep.sort_unstable();
            dropped = points.len() - cap;
            points = keep.into_iter().map(|i| points[i]).collect();
        }
    }
    Ok(ZeroSet { level, points, seed_id: zs.seed_id.clone(), failures, rejected, dropped })
}

/// Levels 0..=n starting from `seed`.
pub fn pullback_levels(seed: &ZeroSet, n: usize, opts: &PullbackOptions) -> Result<Vec<ZeroSet>, LeeYangError> {
    let mut out = vec![seed.clone()];
    for _ in 0..n {
        let next = pullback_zeros_with(out.last().unwrap(), opts)?;
        out.push(next);
    }
    Ok(out)
}

/// f64 verification errors above this are redone at `VERIFY_BITS`.
pub const VERIFY_RECHECK: f64 = 1e-8;
pub const VERIFY_BITS: usize = 256;

/// Circular distance between θ after `level` forward steps and the seed
/// angle. Large errors are recomputed at high precision, which removes the
/// arithmetic drift; what remains is the rounding of the stored point itself,
/// amplified near (θ, t) = (±π/2, 1) where z² + t² vanishes.
pub fn verify_point(x: &CylinderPoint, level: usize, seed_theta: f64) -> f64 {
    let y = (0..level).fold(*x, |y, _| cyl_step(y));
    let e = circ_diff(y.theta, seed_theta).abs();
    if e <= VERIFY_RECHECK {
        return e;
    }
    circ_diff(cyl_orbit_big(*x, level, VERIFY_BITS).theta, seed_theta).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub level: usize,
    pub n_points: usize,
    pub max_error: f64,
    pub tol: f64,
    /// Points whose error exceeds `tol`.
    pub n_over: usize,
}

impl VerifyReport {
    pub fn passes(&self) -> bool {
        self.n_over == 0
    }
}

/// Forward verification of every point against the seed angle.
pub fn verify_zero_set(zs: &ZeroSet, seed_theta: f64, tol: f64) -> VerifyReport {
    let errs: Vec<f64> = zs.points.par_iter().map(|x| verify_point(x, zs.level, seed_theta)).collect();
    VerifyReport {
        level: zs.level,
        n_points: errs.len(),
        max_error: errs.iter().cloned().fold(0.0, f64::max),
        tol,
        n_over: errs.iter().filter(|&&e| e > tol).count(),
    }
}

impl ZeroSet {
    pub fn thetas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.theta).collect()
    }

    /// Largest |θ(x) + θ(x̄)| mismatch: for every point, distance from its
    /// conjugate to the nearest point of the set. Quadratic; for checks only.
    pub fn conjugation_asymmetry(&self) -> f64 {
        self.points
            .par_iter()
            .map(|x| {
                self.points
                    .iter()
                    .map(|y| circ_diff(y.theta, -x.theta).abs().max((y.t - x.t).abs()))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    }

    /// Columns level, theta, t.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LeeYangError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["level", "theta", "t"])?;
        for p in &self.points {
            out.write_record([self.level.to_string(), p.theta.to_string(), p.t.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn lifted_orbit(theta: f64, t0: f64, level: usize) -> f64 {
    (0..level).fold((theta, t0), |(th, t), _| lift_step(th, t)).0
}

/// S_n ∩ T_{t0}: the angles θ with ℛⁿ(e^{iθ}, t0) on the seed line θ = seed,
/// found as crossings of the lifted n-th iterate with seed + 2πk on a grid of
/// `grid_factor`·4ⁿ cells, each refined by bisection. Requires t0 < 1.
pub fn zeros_on_circle(seed_theta: f64, t0: f64, level: usize, grid_factor: usize) -> Result<Vec<f64>, LeeYangError> {
    if !(0.0..1.0).contains(&t0) || level > 12 || grid_factor == 0 {
        return Err(LeeYangError::InvalidParams("need 0 <= t0 < 1, level <= 12, grid_factor >= 1".into()));
    }
    let n = grid_factor << (2 * level);
    let grid: Vec<f64> = (0..=n).into_par_iter().map(|j| lifted_orbit(TAU * j as f64 / n as f64, t0, level)).collect();
    let mut roots: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let (a, b) = (TAU * j as f64 / n as f64, TAU * (j + 1) as f64 / n as f64);
            let (fa, fb) = (grid[j], grid[j + 1]);
            // each grid value gets one floor, shared by both cells it bounds,
            // so a crossing at a grid point is counted once
            let ka = ((fa - seed_theta) / TAU).floor() as i64;
            let kb = ((fb - seed_theta) / TAU).floor() as i64;
            (ka.min(kb) + 1..=ka.max(kb))
                .map(move |k| {
                    let target = seed_theta + TAU * k as f64;
                    let up = fb >= fa;
                    let (mut x0, mut x1) = (a, b);
                    for _ in 0..60 {
                        let m = 0.5 * (x0 + x1);
                        if m <= x0 || m >= x1 {
                            break;
                        }
                        if (lifted_orbit(m, t0, level) < target) == up {
                            x0 = m;
                        } else {
                            x1 = m;
                        }
                    }
                    wrap_angle(0.5 * (x0 + x1))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// The default seed angle.
pub const DEFAULT_SEED_THETA: f64 = PI;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_level_pullback() {
        let s = seed_curve(PI, 16);
        let z1 = pullback_zeros(&s).unwrap();
        assert_eq!(z1.failures, 0);
        assert!(z1.points.len() >= 2 * 16);
        assert!(verify_zero_set(&z1, PI, 1e-9).passes());
        assert!(z1.points.iter().all(|p| (p.z().norm() - 1.0).abs() <= 1e-8));
    }

    #[test]
    fn circle_zeros_at_t0_zero() {
        // on t = 0 the level-n zeros are θ with 4ⁿθ ≡ π: 4ⁿ equally spaced angles
        let z = zeros_on_circle(PI, 0.0, 3, 4).unwrap();
        assert_eq!(z.len(), 64);
        for (k, th) in z.iter().enumerate() {
            assert!((th - (PI + TAU * k as f64) / 64.0).abs() < 1e-12);
        }
    }
}
