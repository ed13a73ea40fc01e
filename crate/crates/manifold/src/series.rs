//! The stable foliation of a polynomial skew product
//! P(z, w) = (p(z, w), w^a), with p(z, 0) = z^b, as a graph over the circle:
//! h(z₀, w) = Σ a_j(z₀) w^j, a₀ = z₀, satisfying p(h(z₀, w), w) = h(z₀^b, w^a).
//!
//! Matching powers of w gives at order j
//!   b z₀^{b−1} a_j = [w^j] h(z₀^b, w^a) − (known terms in a_1 … a_{j−1}),
//! so each a_j is a Laurent polynomial; the right side is a_{j/a} with modes
//! dilated by b when a | j.

use crate::error::ManifoldError;
use crate::field::SeriesField;
use crate::laurent::Laurent;
use circlelab_core::{Complex64, GaussRat, PrecisionContext};
use circlelab_maps::MapSpec;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Default cap on the order in exact rational mode; coefficient sizes grow
/// quickly beyond it.
pub const EXACT_ORDER_CAP: usize = 64;

#[derive(Debug, Clone)]
pub struct CircleSeries<F> {
    pub map_name: String,
    pub order: usize,
    pub a: u32,
    pub b: u32,
    /// coeffs[j] = a_j(z₀), j = 0..=order.
    pub coeffs: Vec<Laurent<F>>,
}

/// Result of `solve_series`, in the arithmetic the context asks for.
#[derive(Debug, Clone)]
pub enum AnySeries {
    Exact(CircleSeries<GaussRat>),
    Float(CircleSeries<Complex64>),
}

#[derive(Serialize)]
struct Row<'a> {
    j: usize,
    mode: i64,
    coeff_re: &'a str,
    coeff_im: &'a str,
}

/// Polynomial coefficients of the first component, as (i, k, c) for c z^i w^k.
fn skew_terms<F: SeriesField>(map: &MapSpec) -> Result<Vec<(u32, u32, F)>, ManifoldError> {
    if !map.is_skew() {
        return Err(ManifoldError::NotSkew(map.name.clone()));
    }
    let f = &map.formula(map.zero_chart())?.formula;
    let mut out = Vec::new();
    for (i, k, c) in f.num1().terms() {
        let v = F::from_c64(*c).ok_or_else(|| ManifoldError::Coefficient(c.to_string()))?;
        out.push((*i, *k, v));
    }
    // p(z, 0) must be exactly z^b
    let line: Vec<_> = out.iter().filter(|t| t.1 == 0).collect();
    if line.len() != 1 || line[0].0 != map.b || line[0].2 != F::one() {
        return Err(ManifoldError::NotSkew(map.name.clone()));
    }
    Ok(out)
}

/// Order-by-order solution through w^order in the field F.
pub fn solve_series_in<F: SeriesField>(map: &MapSpec, order: usize) -> Result<CircleSeries<F>, ManifoldError> {
    let terms = skew_terms::<F>(map)?;
    let (a, b) = (map.a as usize, map.b);
    let d = terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
    let inv_b = F::from_int(b as i64).inv().ok_or_else(|| ManifoldError::Coefficient(format!("1/{b}")))?;
    // t[i][n] = [w^n] h^i
    let mut t: Vec<Vec<Laurent<F>>> = (0..=d).map(|i| vec![Laurent::monomial(i as i64, F::one())]).collect();
    let mut coeffs = vec![Laurent::monomial(1, F::one())];
    for j in 1..=order {
        // [w^j] h^i with a_j still unknown (taken as 0)
        for i in 1..=d {
            let prev = &t[i - 1];
            let cross =
                (1..j).into_par_iter().map(|m| prev[m].mul(&coeffs[j - m])).reduce(Laurent::zero, |x, y| x.add(&y));
            let last = if i == 1 { Laurent::zero() } else { prev[j].shift(1) };
            t[i].push(cross.add(&last));
        }
        t[0].push(Laurent::zero());
        let mut known = Laurent::zero();
        for (i, k, c) in &terms {
            let k = *k as usize;
            if k <= j {
                known = known.add(&t[*i as usize][j - k].scale(c));
            }
        }
        let rhs = if j % a == 0 { coeffs[j / a].dilate(b) } else { Laurent::zero() };
        let aj = rhs.sub(&known).scale(&inv_b).shift(1 - b as i64);
        for (i, row) in t.iter_mut().enumerate().skip(1) {
            let lin = aj.shift(i as i64 - 1).scale(&F::from_int(i as i64));
            row[j] = row[j].add(&lin);
        }
        coeffs.push(aj);
    }
    Ok(CircleSeries { map_name: map.name.clone(), order, a: map.a, b: map.b, coeffs })
}

/// Exact rational series when the context asks for exact mode (subject to
/// `cap`), f64 complex coefficients otherwise.
pub fn solve_series(
    map: &MapSpec,
    order: usize,
    ctx: &PrecisionContext,
    cap: usize,
) -> Result<AnySeries, ManifoldError> {
    ctx.validate()?;
    if ctx.exact_mode {
        if order > cap {
            return Err(ManifoldError::OrderOverflow { order, cap });
        }
        Ok(AnySeries::Exact(solve_series_in(map, order)?))
    } else {
        Ok(AnySeries::Float(solve_series_in(map, order)?))
    }
}

/// How far the functional equation holds for a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    /// Coefficients of w^0 … w^checked were computed.
    pub checked: usize,
    /// Lowest power of w with a nonzero residual coefficient, if any ≤ checked.
    pub valuation: Option<usize>,
}

impl ResidualReport {
    /// The residual vanishes to order > n.
    pub fn valuation_exceeds(&self, n: usize) -> bool {
        match self.valuation {
            Some(v) => v > n,
            None => self.checked >= n,
        }
    }
}

type WSeries<F> = Vec<Laurent<F>>;

fn wmul<F: SeriesField>(x: &WSeries<F>, y: &WSeries<F>, keep: usize) -> WSeries<F> {
    let mut out = vec![Laurent::zero(); keep + 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            if i + j <= keep && !a.is_zero() && !b.is_zero() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
    }
    out
}

/// p(h(z₀, w), w) − h(z₀^b, w^a) for the truncated series, expanded directly
/// (plain power products, no recurrence) through w^order.
pub fn functional_residual<F: SeriesField>(
    map: &MapSpec,
    s: &CircleSeries<F>,
) -> Result<ResidualReport, ManifoldError> {
    let terms = skew_terms::<F>(map)?;
    let keep = s.order;
    let h: WSeries<F> = s.coeffs.clone();
    let d = terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
    let mut pows: Vec<WSeries<F>> = vec![vec![Laurent::monomial(0, F::one())]];
    for i in 1..=d {
        pows.push(wmul(&pows[i - 1], &h, keep));
    }
    let mut lhs = vec![Laurent::zero(); keep + 1];
    for (i, k, c) in &terms {
        for (n, v) in pows[*i as usize].iter().enumerate() {
            let m = n + *k as usize;
            if m <= keep {
                lhs[m] = lhs[m].add(&v.scale(c));
            }
        }
    }
    for (j, aj) in h.iter().enumerate() {
        let m = j * s.a as usize;
        if m <= keep {
            lhs[m] = lhs[m].sub(&aj.dilate(s.b));
        }
    }
    let valuation = lhs.iter().position(|x| !x.is_zero());
    Ok(ResidualReport { checked: s.order, valuation })
}

impl<F: SeriesField> CircleSeries<F> {
    /// h(z₀, w) with f64 arithmetic.
    pub fn eval(&self, z0: Complex64, w: Complex64) -> Option<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for a in self.coeffs.iter().rev() {
            s = s * w + a.eval(z0)?;
        }
        Some(s)
    }

    pub fn bandwidths(&self) -> Vec<i64> {
        self.coeffs.iter().map(|c| c.bandwidth()).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ManifoldError> {
        let mut out = csv::Writer::from_writer(w);
        for (j, a) in self.coeffs.iter().enumerate() {
            for (mode, c) in a.terms() {
                let (re, im) = c.parts();
                out.serialize(Row { j, mode, coeff_re: &re, coeff_im: &im })?;
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let modes: Vec<serde_json::Value> = a
                    .terms()
                    .map(|(k, c)| {
                        let (re, im) = c.parts();
                        serde_json::json!({ "mode": k, "re": re, "im": im })
                    })
                    .collect();
                let (lo, hi) = a.mode_range().unwrap_or((0, 0));
                serde_json::json!({ "j": j, "lo": lo, "hi": hi, "modes": modes })
            })
            .collect();
        let v = serde_json::json!({
            "map_name": self.map_name,
            "order": self.order,
            "field": F::name(),
            "a": self.a,
            "b": self.b,
            "coeffs": coeffs,
        });
        serde_json::to_string_pretty(&v).expect("series serializes")
    }
}

impl AnySeries {
    pub fn order(&self) -> usize {
        match self {
            AnySeries::Exact(s) => s.order,
            AnySeries::Float(s) => s.order,
        }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ManifoldError> {
        match self {
            AnySeries::Exact(s) => s.write_csv(w),
            AnySeries::Float(s) => s.write_csv(w),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnySeries::Exact(s) => s.to_json(),
            AnySeries::Float(s) => s.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussM61;
    use circlelab_core::exact::rat;
    use circlelab_maps::catalog;

    #[test]
    fn low_orders_of_f() {
        let f = catalog::f_map();
        let s: CircleSeries<GaussRat> = solve_series_in(&f, 4).unwrap();
        assert_eq!(s.coeffs[0], Laurent::monomial(1, GaussRat::one()));
        let third = GaussRat::new(rat(-2, 3), rat(0, 1));
        assert_eq!(s.coeffs[1], Laurent::monomial(0, third));
        // (4z₀ − 2)/(9z₀²) = −2/9 z₀⁻² + 4/9 z₀⁻¹
        let c = |n, d| GaussRat::new(rat(n, d), rat(0, 1));
        assert_eq!(s.coeffs[2], Laurent::from_coeffs(-2, vec![c(-2, 9), c(4, 9)]));
    }

    #[test]
    fn mod_p_matches_exact_support() {
        let f = catalog::f_map();
        let e: CircleSeries<GaussRat> = solve_series_in(&f, 16).unwrap();
        let p: CircleSeries<GaussM61> = solve_series_in(&f, 16).unwrap();
        for j in 0..=16 {
            assert_eq!(e.coeffs[j].mode_range(), p.coeffs[j].mode_range(), "j = {j}");
        }
    }

    #[test]
    fn non_skew_maps_are_refused() {
        let g = catalog::g_map();
        assert!(matches!(solve_series_in::<Complex64>(&g, 4), Err(ManifoldError::NotSkew(_))));
        let ctx = PrecisionContext::exact();
        let f = catalog::f_map();
        assert!(matches!(solve_series(&f, 100, &ctx, EXACT_ORDER_CAP), Err(ManifoldError::OrderOverflow { .. })));
    }
}
