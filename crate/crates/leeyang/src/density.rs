//! μ_t: the pushforward of Lebesgue measure on the base circle along the
//! holonomy leaves, as a histogram of arrival angles.

use crate::cylinder::wrap_angle;
use crate::error::LeeYangError;
use crate::holonomy::{circular_order_preserved, holonomy_leaf_with, HolonomyOptions, MAX_STEP, VALIDATED_T_MAX};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::io::Write;

/// Fraction of leaves allowed to fail.
pub const MAX_FAILED_FRACTION: f64 = 0.01;
pub const LEAF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityHistogram {
    pub t: f64,
    /// (lo, hi, mass) over [0, 2π).
    pub bins: Vec<(f64, f64, f64)>,
    pub n_samples: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRun {
    pub histogram: DensityHistogram,
    pub departures: Vec<f64>,
    /// Arrival angles in [0, 2π), NaN for failed leaves.
    pub arrivals: Vec<f64>,
    pub order_preserved: bool,
}

/// Bin masses of angles over `n_bins` equal bins of [0, 2π).
pub fn histogram_masses(thetas: &[f64], n_bins: usize) -> Vec<f64> {
    let mut m = vec![0.0; n_bins];
    if thetas.is_empty() || n_bins == 0 {
        return m;
    }
    for &th in thetas {
        // within rounding of an edge counts as the upper bin
        let x = wrap_angle(th) / TAU * n_bins as f64;
        let b = ((x + 1e-9 * x.max(1.0)) as usize).min(n_bins - 1);
        m[b] += 1.0;
    }
    let n = thetas.len() as f64;
    m.iter_mut().for_each(|v| *v /= n);
    m
}

pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Kolmogorov–Smirnov distance between the empirical law of the angles and
/// the uniform law on [0, 2π).
pub fn ks_uniform(thetas: &[f64]) -> f64 {
    let mut u: Vec<f64> = thetas.iter().map(|&x| wrap_angle(x) / TAU).collect();
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter().enumerate().map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs())).fold(0.0, f64::max)
}

pub fn density(t0: f64, n_leaves: usize) -> Result<DensityHistogram, LeeYangError> {
    Ok(density_run(t0, n_leaves, &HolonomyOptions::default())?.histogram)
}

/// θ₀ = 2πk/n for k < n; bin count max(n/100, 32).
pub fn density_run(t0: f64, n_leaves: usize, opts: &HolonomyOptions) -> Result<DensityRun, LeeYangError> {
    if !(0.0..=VALIDATED_T_MAX).contains(&t0) || n_leaves == 0 {
        return Err(LeeYangError::InvalidParams(format!("need 0 <= t0 <= {VALIDATED_T_MAX} and n_leaves > 0")));
    }
    let departures: Vec<f64> = (0..n_leaves).map(|k| TAU * k as f64 / n_leaves as f64).collect();
    let arrivals: Vec<f64> = departures
        .par_iter()
        .map(|&th0| match holonomy_leaf_with(th0, t0, MAX_STEP, LEAF_TOL, opts) {
            Ok(l) => wrap_angle(l.end().1),
            Err(_) => f64::NAN,
        })
        .collect();
    let failures = arrivals.iter().filter(|a| a.is_nan()).count();
    if failures as f64 > MAX_FAILED_FRACTION * n_leaves as f64 {
        return Err(LeeYangError::TooManyLeafFailures { failed: failures, total: n_leaves });
    }
    let (dep, arr): (Vec<f64>, Vec<f64>) =
        departures.iter().zip(&arrivals).filter(|p| !p.1.is_nan()).map(|(a, b)| (*a, *b)).unzip();
    let n_bins = (n_leaves / 100).max(32);
    let masses = histogram_masses(&arr, n_bins);
    let w = TAU / n_bins as f64;
    let bins = masses.iter().enumerate().map(|(i, &m)| (i as f64 * w, (i + 1) as f64 * w, m)).collect();
    Ok(DensityRun {
        histogram: DensityHistogram { t: t0, bins, n_samples: arr.len(), failures },
        order_preserved: circular_order_preserved(&dep, &arr),
        departures,
        arrivals,
    })
}

impl DensityHistogram {
    pub fn masses(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.2).collect()
    }

    /// Columns bin_lo, bin_hi, mass.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LeeYangError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["bin_lo", "bin_hi", "mass"])?;
        for (lo, hi, m) in &self.bins {
            out.write_record([lo.to_string(), hi.to_string(), m.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(t: f64, r: R) -> Result<Self, LeeYangError> {
        let mut rd = csv::Reader::from_reader(r);
        let bins = rd.deserialize::<(f64, f64, f64)>().collect::<Result<Vec<_>, _>>()?;
        Ok(DensityHistogram { t, bins, n_samples: 0, failures: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_circle_density_is_uniform() {
        let h = density(0.0, 3200).unwrap();
        assert_eq!(h.bins.len(), 32);
        assert!(h.masses().iter().all(|&m| m == 1.0 / 32.0));
    }

    #[test]
    fn ks_of_a_grid() {
        let g: Vec<f64> = (0..100).map(|k| TAU * k as f64 / 100.0).collect();
        assert!((ks_uniform(&g) - 0.01).abs() < 1e-12);
    }
}
