//! The forward-invariant neighbourhood Ω = V(ε₁, ε₂) ∪ U₁(ε₁, δ₁) ∪ U₂(ε₂, δ₂)
//! of the invariant circle, in the coordinates (z, λ = w/z^b) near the two
//! fixed points of the line and a tube around the rest of the line.

use crate::error::BottcherError;
use crate::phi::{guard_value, line_chart};
use circlelab_core::rng::{uniform_annulus, uniform_disc};
use circlelab_core::{ChartId, ChartPoint, Complex64, CounterRng};
use circlelab_maps::{eval, ChartRole, MapSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionParams {
    /// Disc radius around the fixed point in the zero chart.
    pub eps1: f64,
    /// Disc radius around the fixed point in the infinity chart.
    pub eps2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Bound on |w|/|z|^b throughout Ω.
    pub k: f64,
    /// Radius of the tube V around the line.
    pub tube: f64,
}

impl RegionParams {
    pub fn new(eps: f64, delta: f64, k: f64, tube: f64) -> Self {
        RegionParams { eps1: eps, eps2: eps, delta1: delta, delta2: delta, k, tube }
    }

    /// eps1 = eps2 = 0 denotes the empty region.
    pub fn is_empty(&self) -> bool {
        self.eps1 <= 0.0 && self.eps2 <= 0.0
    }

    pub fn check(&self) -> Result<(), BottcherError> {
        let bad = |s: &str| Err(BottcherError::InvalidParams(s.into()));
        let all = [self.eps1, self.eps2, self.delta1, self.delta2, self.k, self.tube];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return bad("parameters must be finite and non-negative");
        }
        if self.is_empty() {
            return Ok(());
        }
        if !(self.eps1 > 0.0 && self.eps1 < 1.0 && self.eps2 > 0.0 && self.eps2 < 1.0) {
            return bad("eps1, eps2 must lie in (0, 1)");
        }
        if self.delta1 > self.k || self.delta2 > self.k {
            return bad("delta must not exceed K");
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, BottcherError> {
        let r: RegionParams = serde_json::from_str(s).map_err(|e| BottcherError::InvalidParams(e.to_string()))?;
        r.check()?;
        Ok(r)
    }
}

fn lambda(p: &ChartPoint, b: u32) -> f64 {
    let w = p.c2.norm();
    if w == 0.0 {
        return 0.0;
    }
    w / p.c1.norm().powi(b as i32)
}

/// Membership in Ω.
pub fn in_omega(map: &MapSpec, x: &ChartPoint, r: &RegionParams) -> bool {
    if r.is_empty() {
        return false;
    }
    let Ok((p, role)) = line_chart(map, x) else { return false };
    let (eps, delta) = match role {
        ChartRole::Infinity => (r.eps2, r.delta2),
        _ => (r.eps1, r.delta1),
    };
    let lam = lambda(&p, map.b);
    if p.c1.norm() < eps {
        lam < delta
    } else {
        p.c2.norm() < r.tube && lam < r.k
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRow {
    pub chart: ChartId,
    pub z: Complex64,
    pub w: Complex64,
    pub guard: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub params: RegionParams,
    pub n_samples: usize,
    pub violations: usize,
    pub max_guard: f64,
    /// The region was empty; success is vacuous.
    pub vacuous: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<SampleRow>,
}

impl ValidationReport {
    pub fn success(&self) -> bool {
        self.vacuous || (self.violations == 0 && self.max_guard < 0.5)
    }

    /// CSV with one row per sample.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "sample_z_re",
            "sample_z_im",
            "sample_w_re",
            "sample_w_im",
            "guard_value",
            "violated",
            "chart",
        ])?;
        for r in &self.rows {
            out.write_record(&[
                r.z.re.to_string(),
                r.z.im.to_string(),
                r.w.re.to_string(),
                r.w.im.to_string(),
                r.guard.to_string(),
                r.violated.to_string(),
                r.chart.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Sample `i` of Ω: components U₁, U₂, V∩{zero chart}, V∩{infinity chart}
/// in turn, each area-uniform.
pub fn sample_omega(map: &MapSpec, r: &RegionParams, rng: &CounterRng, i: usize) -> Option<ChartPoint> {
    let mut g = rng.stream(i as u64);
    let b = map.b as i32;
    let (chart, eps, delta) = match i % 4 {
        0 | 2 => (map.zero_chart(), r.eps1, r.delta1),
        _ => (map.infinity_chart()?, r.eps2, r.delta2),
    };
    if i % 4 < 2 {
        if eps <= 0.0 || delta <= 0.0 {
            return None;
        }
        let z = uniform_disc(&mut g, eps);
        let w = uniform_disc(&mut g, delta * z.norm().powi(b));
        Some(ChartPoint::new(chart, z, w))
    } else {
        // the infinity chart's annulus stops short of the unit circle, which the zero chart owns
        let hi = if i % 4 == 2 { 1.0 } else { 1.0 - 1e-12 };
        if eps >= hi || r.tube <= 0.0 {
            return None;
        }
        let z = uniform_annulus(&mut g, eps.max(0.0), hi);
        let w = uniform_disc(&mut g, r.tube.min(r.k * z.norm().powi(b)));
        Some(ChartPoint::new(chart, z, w))
    }
}

/// Monte-Carlo forward-invariance check of Ω.
pub fn validate_region(map: &MapSpec, r: &RegionParams, n_samples: usize, seed: u64) -> ValidationReport {
    let mut warnings = Vec::new();
    if r.is_empty() {
        warnings.push("region is empty (eps1 = eps2 = 0): success is vacuous".to_string());
        return ValidationReport {
            params: *r,
            n_samples: 0,
            violations: 0,
            max_guard: 0.0,
            vacuous: true,
            warnings,
            rows: Vec::new(),
        };
    }
    let rng = CounterRng::new(seed);
    let rows: Vec<SampleRow> = (0..n_samples)
        .into_par_iter()
        .filter_map(|i| {
            let x = sample_omega(map, r, &rng, i)?;
            let guard = guard_value(map, &x).unwrap_or(f64::INFINITY);
            let violated = match eval(map, &x) {
                Ok(y) => !in_omega(map, &y, r),
                Err(_) => true,
            };
            Some(SampleRow { chart: x.chart, z: x.c1, w: x.c2, guard, violated })
        })
        .collect();
    if rows.len() < n_samples {
        warnings.push(format!("{} of {n_samples} sample slots fall in empty components", n_samples - rows.len()));
    }
    let violations = rows.iter().filter(|r| r.violated).count();
    let max_guard = rows.iter().map(|r| r.guard).fold(0.0, f64::max);
    ValidationReport {
        params: *r,
        n_samples: rows.len(),
        violations,
        max_guard,
        vacuous: rows.is_empty(),
        warnings,
        rows,
    }
}

pub const SEARCH_START: f64 = 0.3;
pub const SEARCH_FLOOR: f64 = 1e-4;

/// Shrink eps = delta (capped by K) and, for each, the tube, by halves from
/// 0.3 until a region validates at `n_samples`.
pub fn search_region(map: &MapSpec, k: f64, n_samples: usize, seed: u64) -> Result<RegionParams, BottcherError> {
    if !(k > 0.0) {
        return Err(BottcherError::InvalidParams("K must be positive".into()));
    }
    let mut eps = SEARCH_START;
    while eps >= SEARCH_FLOOR {
        let mut tube = SEARCH_START;
        while tube >= SEARCH_FLOOR {
            let r = RegionParams::new(eps, eps.min(k), k, tube);
            // cheap screen first, then the full count
            let quick = validate_region(map, &r, n_samples.min(2000), seed ^ 0x5eed);
            if quick.success() && validate_region(map, &r, n_samples, seed).success() {
                return Ok(r);
            }
            tube /= 2.0;
        }
        eps /= 2.0;
    }
    Err(BottcherError::NoValidRegion { floor: SEARCH_FLOOR })
}
