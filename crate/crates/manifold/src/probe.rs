//! Growth of the foliation coefficients: Laurent bandwidth per order and
//! ρ_j(r) = max over the annulus 1/r ≤ |z₀| ≤ r of |a_j(z₀)|. A bandwidth
//! growing faster than linearly in j forces ρ_j(r)^{1/j} → ∞ for every r > 1.

use crate::error::ManifoldError;
use crate::field::SeriesField;
use crate::series::CircleSeries;
use serde::Serialize;
use std::io::Write;

pub const MIN_PROBE_ORDER: usize = 16;

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub j: usize,
    pub lo: i64,
    pub hi: i64,
    pub bandwidth: i64,
    /// ln ρ_j(r) per radius; NaN when the field has no complex values.
    pub ln_rho: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub j_min: usize,
    pub j_max: usize,
    /// Slope of ln(mode count) against ln j.
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit, in ln units.
    pub rms_residual: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub map_name: String,
    pub order: usize,
    pub radii: Vec<f64>,
    pub w_max: f64,
    pub rows: Vec<ProbeRow>,
    pub fit: Option<GrowthFit>,
    /// max_j ρ_j(r)^{1/j} over j ≥ 1, per radius.
    pub root_max: Vec<f64>,
    /// max_j ρ_j(r) w_max^j, per radius: a crude size of the series terms.
    pub term_max: Vec<f64>,
}

/// Least squares of ln(mode count) on ln(j) for j in [j_min, j_max], where
/// the mode count hi − lo + 1 is the bandwidth plus one; zero coefficients
/// (count 0) are skipped. Counting modes keeps monomial coefficients, whose
/// bandwidth is 0, in the fit.
pub fn fit_growth(mode_counts: &[i64], j_min: usize, j_max: usize) -> Option<GrowthFit> {
    let pts: Vec<(f64, f64)> = (j_min.max(1)..=j_max.min(mode_counts.len().saturating_sub(1)))
        .filter(|&j| mode_counts[j] > 0)
        .map(|j| ((j as f64).ln(), (mode_counts[j] as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - icpt - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Some(GrowthFit { j_min, j_max, exponent: slope, intercept: icpt, rms_residual: rms, points: pts.len() })
}

/// Probe with the default fit window j ∈ [8, J/2].
pub fn analyticity_probe<F: SeriesField>(
    series: &CircleSeries<F>,
    radii: &[f64],
    w_max: f64,
) -> Result<ProbeReport, ManifoldError> {
    analyticity_probe_with(series, radii, w_max, (8, series.order / 2))
}

pub fn analyticity_probe_with<F: SeriesField>(
    series: &CircleSeries<F>,
    radii: &[f64],
    w_max: f64,
    window: (usize, usize),
) -> Result<ProbeReport, ManifoldError> {
    if series.order < MIN_PROBE_ORDER {
        return Err(ManifoldError::InvalidParams(format!(
            "probe needs order >= {MIN_PROBE_ORDER}, got {}",
            series.order
        )));
    }
    if radii.iter().any(|r| !(*r >= 1.0) || !r.is_finite()) || !(w_max > 0.0) {
        return Err(ManifoldError::InvalidParams("radii must be >= 1 and w_max > 0".into()));
    }
    let rows: Vec<ProbeRow> = series
        .coeffs
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let (lo, hi) = a.mode_range().unwrap_or((0, 0));
            let n = (8 * (hi - lo + 1) as usize).max(64);
            let ln_rho = radii
                .iter()
                .map(|&r| {
                    // maximum principle: the annulus maximum sits on a boundary circle
                    let outer = a.ln_max_on_circle(r, n);
                    let inner = a.ln_max_on_circle(1.0 / r, n);
                    match (outer, inner) {
                        (Some(x), Some(y)) => x.max(y),
                        _ => f64::NAN,
                    }
                })
                .collect();
            ProbeRow { j, lo, hi, bandwidth: a.bandwidth(), ln_rho }
        })
        .collect();
    let counts: Vec<i64> = series.coeffs.iter().map(|a| a.mode_count()).collect();
    let fit = fit_growth(&counts, window.0, window.1);
    let per_radius = |f: &dyn Fn(&ProbeRow, f64) -> f64| -> Vec<f64> {
        (0..radii.len())
            .map(|k| {
                rows.iter()
                    .skip(1)
                    .map(|row| f(row, row.ln_rho[k]))
                    .filter(|v| !v.is_nan())
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .map(f64::exp)
            .collect()
    };
    let root_max = per_radius(&|row, l| l / row.j as f64);
    let term_max = per_radius(&|row, l| l + row.j as f64 * w_max.ln());
    Ok(ProbeReport {
        map_name: series.map_name.clone(),
        order: series.order,
        radii: radii.to_vec(),
        w_max,
        rows,
        fit,
        root_max,
        term_max,
    })
}

impl ProbeReport {
    /// Columns j, bandwidth, rho_r<radius>...
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ManifoldError> {
        let mut out = csv::Writer::from_writer(w);
        let mut head = vec!["j".to_string(), "bandwidth".to_string()];
        head.extend(self.radii.iter().map(|r| format!("rho_r{r}")));
        out.write_record(&head)?;
        for row in &self.rows {
            let mut rec = vec![row.j.to_string(), row.bandwidth.to_string()];
            rec.extend(row.ln_rho.iter().map(|l| l.exp().to_string()));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_a_power_law() {
        let bw: Vec<i64> = (0..200).map(|j| (3.0 * (j as f64).powf(1.5)).round() as i64).collect();
        let f = fit_growth(&bw, 8, 128).unwrap();
        assert!((f.exponent - 1.5).abs() < 0.01, "{f:?}");
        assert!(f.rms_residual < 0.01);
    }
}
