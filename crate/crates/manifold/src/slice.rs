//! Slices of the local stable manifold at a fixed transverse parameter: along
//! each radial ray ℓ = r e^{iθ} of the zero chart the two basins meet at
//! one radius, found by bisection on the orbit class.

use crate::classify::{classify_with, ClassifyOptions, OrbitClass};
use crate::error::ManifoldError;
use crate::field::SeriesField;
use crate::series::CircleSeries;
use circlelab_bottcher::psi;
use circlelab_core::{ChartId, ChartPoint, Complex64};
use circlelab_maps::MapSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceSample {
    pub map_name: String,
    pub chart: ChartId,
    pub fiber: Complex64,
    pub thetas: Vec<f64>,
    pub radii: Vec<f64>,
    pub tol: f64,
    /// Classification (or ψ) evaluations per angle, endpoints excluded.
    pub calls: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceOptions {
    pub bracket: (f64, f64),
    pub classify: ClassifyOptions,
    /// Budget multiplier for the single retry of an undecided orbit.
    pub retry_factor: usize,
}

impl Default for SliceOptions {
    fn default() -> Self {
        SliceOptions { bracket: (0.8, 1.2), classify: ClassifyOptions::default(), retry_factor: 4 }
    }
}

/// Angles (k + 1/2)·2π/n; the half offset keeps the fixed point ℓ = 1 off the grid.
pub fn default_thetas(n: usize) -> Vec<f64> {
    (0..n).map(|k| (k as f64 + 0.5) * TAU / n as f64).collect()
}

fn ray_point(map: &MapSpec, fiber: Complex64, theta: f64, r: f64) -> ChartPoint {
    ChartPoint::new(map.zero_chart(), Complex64::from_polar(r, theta), fiber)
}

fn decided(
    map: &MapSpec,
    x: &ChartPoint,
    opts: &SliceOptions,
    theta: f64,
    r: f64,
) -> Result<OrbitClass, ManifoldError> {
    let c = classify_with(map, x, &opts.classify);
    if c != OrbitClass::Undecided {
        return Ok(c);
    }
    let budget = opts.classify.budget * opts.retry_factor.max(1);
    let c = classify_with(map, x, &ClassifyOptions { budget, ..opts.classify });
    if c == OrbitClass::Undecided {
        return Err(ManifoldError::Undecided { theta, radius: r, budget });
    }
    Ok(c)
}

/// Boundary radius on one ray, and the number of midpoint classifications.
pub fn bisect_ray(
    map: &MapSpec,
    fiber: Complex64,
    theta: f64,
    tol: f64,
    opts: &SliceOptions,
) -> Result<(f64, usize), ManifoldError> {
    let (mut lo, mut hi) = opts.bracket;
    let c_lo = decided(map, &ray_point(map, fiber, theta, lo), opts, theta, lo)?;
    let c_hi = decided(map, &ray_point(map, fiber, theta, hi), opts, theta, hi)?;
    if c_lo == c_hi {
        return Err(ManifoldError::BracketFailure { theta, class: c_lo.as_str().into() });
    }
    let mut calls = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        calls += 1;
        let c = decided(map, &ray_point(map, fiber, theta, mid), opts, theta, mid)?;
        if c == OrbitClass::ToCircle {
            return Ok((mid, calls));
        }
        if c == c_lo {
            lo = mid;
        } else if c == c_hi {
            hi = mid;
        } else {
            return Err(ManifoldError::BracketFailure { theta, class: format!("{} inside the bracket", c.as_str()) });
        }
    }
    Ok((0.5 * (lo + hi), calls))
}

pub fn bisect_slice(map: &MapSpec, fiber: Complex64, n_thetas: usize, tol: f64) -> Result<SliceSample, ManifoldError> {
    bisect_slice_with(map, fiber, &default_thetas(n_thetas), tol, &SliceOptions::default())
}

pub fn bisect_slice_with(
    map: &MapSpec,
    fiber: Complex64,
    thetas: &[f64],
    tol: f64,
    opts: &SliceOptions,
) -> Result<SliceSample, ManifoldError> {
    if !(tol > 0.0) || thetas.is_empty() {
        return Err(ManifoldError::InvalidParams("need tol > 0 and at least one angle".into()));
    }
    let found: Vec<(f64, usize)> =
        thetas.par_iter().map(|&th| bisect_ray(map, fiber, th, tol, opts)).collect::<Result<_, _>>()?;
    Ok(SliceSample {
        map_name: map.name.clone(),
        chart: map.zero_chart(),
        fiber,
        thetas: thetas.to_vec(),
        radii: found.iter().map(|f| f.0).collect(),
        tol,
        calls: found.iter().map(|f| f.1).collect(),
    })
}

/// The level set ψ = 0 on the same rays, by bisection on the sign of ψ.
pub fn psi_contour(
    map: &MapSpec,
    fiber: Complex64,
    thetas: &[f64],
    tol: f64,
    psi_tol: f64,
    bracket: (f64, f64),
) -> Result<SliceSample, ManifoldError> {
    let ray = |&theta: &f64| -> Result<(f64, usize), ManifoldError> {
        let sign = |r: f64| -> Result<bool, ManifoldError> {
            Ok(psi(map, &ray_point(map, fiber, theta, r), psi_tol)?.value > 0.0)
        };
        let (mut lo, mut hi) = bracket;
        let (s_lo, s_hi) = (sign(lo)?, sign(hi)?);
        if s_lo == s_hi {
            return Err(ManifoldError::BracketFailure { theta, class: format!("psi > 0: {s_lo}") });
        }
        let mut calls = 0;
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            calls += 1;
            if sign(mid)? == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((0.5 * (lo + hi), calls))
    };
    let found: Vec<(f64, usize)> = thetas.par_iter().map(ray).collect::<Result<_, _>>()?;
    Ok(SliceSample {
        map_name: map.name.clone(),
        chart: map.zero_chart(),
        fiber,
        thetas: thetas.to_vec(),
        radii: found.iter().map(|f| f.0).collect(),
        tol,
        calls: found.iter().map(|f| f.1).collect(),
    })
}

fn wrap(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    }
    if a <= -PI {
        a += TAU;
    }
    a
}

/// Radius at angle θ of the series curve φ ↦ h(e^{iφ}, w): solves
/// arg h(e^{iφ}, w) = θ by the secant method from φ = θ.
pub fn series_radius<F: SeriesField>(s: &CircleSeries<F>, w: Complex64, theta: f64) -> Option<f64> {
    let h = |phi: f64| s.eval(Complex64::from_polar(1.0, phi), w);
    let g = |phi: f64| h(phi).map(|v| wrap(v.arg() - theta));
    let (mut x0, mut x1) = (theta, theta + 1e-3);
    let (mut g0, mut g1) = (g(x0)?, g(x1)?);
    for _ in 0..60 {
        if g1.abs() < 1e-15 || g1 == g0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g(x1)?;
    }
    (g1.abs() < 1e-12).then(|| h(x1).map(|v| v.norm())).flatten()
}

impl SliceSample {
    pub fn sup_distance(&self, other: &SliceSample) -> f64 {
        self.radii.iter().zip(&other.radii).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest |r(θ) − series radius| over the sample's angles.
    pub fn series_distance<F: SeriesField>(&self, s: &CircleSeries<F>) -> Option<f64> {
        let mut worst = 0.0f64;
        for (th, r) in self.thetas.iter().zip(&self.radii) {
            worst = worst.max((series_radius(s, self.fiber, *th)? - r).abs());
        }
        Some(worst)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ManifoldError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["theta", "radius"])?;
        for (t, r) in self.thetas.iter().zip(&self.radii) {
            out.write_record([t.to_string(), r.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("slice serializes")
    }
}
