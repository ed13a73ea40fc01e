//! Distortion near p∞: for orbits that stay in B_γ ∩ D_ε the first
//! coordinate behaves like p ↦ p⁴ up to a bounded factor, |p_n| ≍ |p_0|^{4^n};
//! for orbits staying in D_ε \ B_γ, |q_n| ≍ |q_0|^{2^n}.
//!
//! Surviving n steps in B_γ needs |q| far below |p| (roughly
//! |q| ≲ |p|^{2^n/γ}), a set of negligible area. Samples therefore take the
//! constrained coordinate log-uniform over `LOG_SPAN_DECADES` decades below
//! its cap; the free coordinate is area-uniform. Orbits run in extended-range
//! arithmetic because |p_n| leaves f64 range after a few steps.

use crate::bullet::{in_bidisk, in_vertical_cone, ConeSpec};
use crate::error::ManifoldError;
use circlelab_core::rng::uniform_disc;
use circlelab_core::{ChartId, Complex64, CounterRng, ExtC, RationalPair};
use circlelab_maps::catalog;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const LOG_SPAN_DECADES: f64 = 32.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistortionKind {
    /// Orbits in B_γ ∩ D_ε, ratio |p_n| / |p_0|^{4^n}.
    Horizontal,
    /// Orbits in D_ε \ B_γ, ratio |q_n| / |q_0|^{2^n}.
    Vertical,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistortionReport {
    pub kind: DistortionKind,
    pub gamma: u32,
    pub eps: f64,
    pub n_used: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub samples: usize,
    pub attempts: usize,
    pub seed: u64,
    /// Ratio range over the survivors whose orbit also stays in the cone
    /// K^h (horizontal) or K^v (vertical), if any.
    pub cone_ratio_range: Option<(f64, f64)>,
    pub cone_samples: usize,
}

impl DistortionReport {
    pub fn spread(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }

    pub fn overlaps(&self, o: &DistortionReport) -> bool {
        self.ratio_min <= o.ratio_max && o.ratio_min <= self.ratio_max
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DistortionOptions {
    pub kind: DistortionKind,
    pub seed: u64,
    /// Give up after n_samples × this many draws.
    pub attempts_per_sample: usize,
}

impl Default for DistortionOptions {
    fn default() -> Self {
        DistortionOptions { kind: DistortionKind::Horizontal, seed: 1, attempts_per_sample: 100 }
    }
}

fn log_uniform<R: Rng>(g: &mut R, cap: f64) -> Complex64 {
    let r = cap * 10f64.powf(-LOG_SPAN_DECADES * g.gen::<f64>());
    Complex64::from_polar(r, TAU * g.gen::<f64>())
}

fn draw(kind: DistortionKind, rng: &CounterRng, i: u64, gamma: u32, eps: f64) -> (Complex64, Complex64) {
    let mut g = rng.stream(i);
    match kind {
        DistortionKind::Horizontal => {
            let p = uniform_disc(&mut g, eps);
            (p, log_uniform(&mut g, eps))
        }
        DistortionKind::Vertical => {
            let q = uniform_disc(&mut g, eps);
            (log_uniform(&mut g, q.norm().powi(gamma as i32)), q)
        }
    }
}

fn pow2k(x: ExtC, k: usize) -> ExtC {
    (0..k).fold(x, |y, _| y * y)
}

/// The distortion ratio after n steps, or None when the orbit leaves the region.
pub fn orbit_ratio(
    f: &RationalPair,
    kind: DistortionKind,
    cone: &ConeSpec,
    eps: f64,
    n: usize,
    p0: Complex64,
    q0: Complex64,
) -> Option<f64> {
    orbit_ratio_cone(f, kind, cone, eps, n, p0, q0).map(|r| r.0)
}

/// As `orbit_ratio`, plus whether the orbit stayed in K^h (horizontal kind)
/// or K^v (vertical kind) throughout.
pub fn orbit_ratio_cone(
    f: &RationalPair,
    kind: DistortionKind,
    cone: &ConeSpec,
    eps: f64,
    n: usize,
    p0: Complex64,
    q0: Complex64,
) -> Option<(f64, bool)> {
    let in_cone = |p: &ExtC, q: &ExtC| match kind {
        DistortionKind::Horizontal => ConeSpec::horizontal().contains(p, q),
        DistortionKind::Vertical => in_vertical_cone(p, q),
    };
    let inside = |p: &ExtC, q: &ExtC| {
        in_bidisk(p, q, eps)
            && match kind {
                DistortionKind::Horizontal => cone.contains(p, q),
                DistortionKind::Vertical => !cone.contains(p, q),
            }
    };
    let (mut p, mut q) = (ExtC::new(p0), ExtC::new(q0));
    if !inside(&p, &q) {
        return None;
    }
    let mut stayed = in_cone(&p, &q);
    for _ in 0..n {
        (p, q) = f.eval_scalar(&p, &q);
        if !inside(&p, &q) {
            return None;
        }
        stayed &= in_cone(&p, &q);
    }
    let (num, den) = match kind {
        DistortionKind::Horizontal => (p, pow2k(ExtC::new(p0), 2 * n)),
        DistortionKind::Vertical => (q, pow2k(ExtC::new(q0), n)),
    };
    let r = (num / den).norm();
    r.is_finite().then_some((r, stayed))
}

/// Horizontal distortion with the default seed.
pub fn distortion_check(gamma: u32, eps: f64, n: usize, n_samples: usize) -> Result<DistortionReport, ManifoldError> {
    distortion_check_with(gamma, eps, n, n_samples, &DistortionOptions::default())
}

pub fn distortion_check_with(
    gamma: u32,
    eps: f64,
    n: usize,
    n_samples: usize,
    opts: &DistortionOptions,
) -> Result<DistortionReport, ManifoldError> {
    let cone = ConeSpec::new(gamma, 1.0)?;
    if !(eps > 0.0 && eps < 1.0) || n_samples == 0 {
        return Err(ManifoldError::InvalidParams("need 0 < eps < 1 and n_samples > 0".into()));
    }
    let r = catalog::cached("R")?;
    let f = &r.formula(ChartId::PqAtInfinity)?.formula;
    let rng = CounterRng::new(opts.seed);
    let max_attempts = n_samples * opts.attempts_per_sample.max(1);
    let mut ratios: Vec<(f64, bool)> = Vec::with_capacity(n_samples);
    let mut attempts = 0;
    let chunk = (2 * n_samples).max(64);
    while ratios.len() < n_samples && attempts < max_attempts {
        let end = (attempts + chunk).min(max_attempts);
        // draws are indexed, so the survivors do not depend on scheduling
        let got: Vec<Option<(f64, bool)>> = (attempts..end)
            .into_par_iter()
            .map(|i| {
                let (p0, q0) = draw(opts.kind, &rng, i as u64, gamma, eps);
                orbit_ratio_cone(f, opts.kind, &cone, eps, n, p0, q0)
            })
            .collect();
        ratios.extend(got.into_iter().flatten().take(n_samples - ratios.len()));
        attempts = end;
    }
    if ratios.is_empty() {
        return Err(ManifoldError::NoSurvivors { attempts });
    }
    let range =
        |it: &mut dyn Iterator<Item = f64>| it.fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (ratio_min, ratio_max) = range(&mut ratios.iter().map(|r| r.0));
    let cone_samples = ratios.iter().filter(|r| r.1).count();
    let cone_ratio_range = (cone_samples > 0).then(|| range(&mut ratios.iter().filter(|r| r.1).map(|r| r.0)));
    Ok(DistortionReport {
        kind: opts.kind,
        gamma,
        eps,
        n_used: n,
        ratio_min,
        ratio_max,
        samples: ratios.len(),
        attempts,
        seed: opts.seed,
        cone_ratio_range,
        cone_samples,
    })
}
