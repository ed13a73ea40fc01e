//! φ = lim z_n^{1/b^n}, evaluated as z₀ Π (z_{n+1}/z_n^b)^{1/b^{n+1}}.
//!
//! Each quotient is 1 + u_n with u_n = (num1 − z^b den1)/(z^b den1) computed
//! from the exact guard numerator, so no cancellation happens even when
//! u_n is tiny. In an inverted chart the quotient is 1/(1 + u_n). Orbits
//! that head for a fixed point underflow f64 within a few dozen iterates;
//! they continue in extended-range arithmetic (f64 mantissa, 64-bit exponent).

use crate::error::BottcherError;
use crate::region::{in_omega, RegionParams};
use circlelab_core::{ChartId, ChartPoint, Complex64, ExtC, Poly2, RationalPair, Scalar};
use circlelab_maps::spec::guard_numerator;
use circlelab_maps::{ChartRole, MapSpec};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BottcherResult {
    pub value: Complex64,
    /// Bound on |value − φ(x)|.
    pub truncation_bound: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiResult {
    pub value: f64,
    pub bound: f64,
    pub terms: usize,
}

#[derive(Debug, Clone, Default)]
pub struct PhiOptions {
    /// Allow maps with a < b (no convergent φ near the full circle).
    pub experimental: bool,
    /// Fail with `OrbitLeftRegion` when an iterate leaves this region.
    pub region: Option<RegionParams>,
}

/// Line coordinate of a point in a chart of the given role.
pub fn line_coord(p: &ChartPoint, role: ChartRole) -> Complex64 {
    match role {
        ChartRole::Infinity => 1.0 / p.c1,
        _ => p.c1,
    }
}

/// Express x in the zero chart when |ℓ| <= 1, otherwise in the infinity
/// chart (falling back to whichever normal-form chart accepts it).
pub fn line_chart(map: &MapSpec, x: &ChartPoint) -> Result<(ChartPoint, ChartRole), BottcherError> {
    let zero = map.zero_chart();
    let inf = map.infinity_chart();
    let try_in = |c: ChartId| circlelab_core::to_chart(x, c, &map.atlas).ok();
    let z = try_in(zero);
    if let Some(p) = z {
        if p.c1.norm() <= 1.0 || inf.is_none() {
            return Ok((p, ChartRole::Zero));
        }
    }
    if let Some(p) = inf.and_then(try_in) {
        return Ok((p, ChartRole::Infinity));
    }
    z.map(|p| (p, ChartRole::Zero)).ok_or_else(|| BottcherError::NoLineChart(map.name.clone()))
}

struct Chart<'a> {
    id: ChartId,
    role: ChartRole,
    f: &'a RationalPair,
    guard: Poly2,
}

struct Prepared<'a> {
    map: &'a MapSpec,
    charts: Vec<Chart<'a>>,
}

impl<'a> Prepared<'a> {
    fn new(map: &'a MapSpec) -> Self {
        let charts = map
            .charts
            .iter()
            .filter(|c| c.role != ChartRole::Aux)
            .map(|c| Chart { id: c.chart, role: c.role, f: &c.formula, guard: guard_numerator(&c.formula, map.b) })
            .collect();
        Prepared { map, charts }
    }

    fn chart(&self, role: ChartRole) -> Option<&Chart<'a>> {
        self.charts.iter().find(|c| c.role == role)
    }
}

/// u = (num1 − x^b den1)/(x^b den1) at (x, y).
fn guard_u<S: Scalar>(c: &Chart, b: u32, x: &S, y: &S) -> Complex64 {
    let den = c.f.den1().eval_scalar(x, y) * x.powu(b);
    let num = c.guard.eval_scalar(x, y);
    if den.is_zero() {
        return Complex64::new(f64::INFINITY, 0.0);
    }
    (num / den).to_c64()
}

fn log1p(u: Complex64) -> Complex64 {
    if u.norm() < 1e-5 {
        u - u * u / 2.0 + u * u * u / 3.0
    } else {
        (1.0 + u).ln()
    }
}

fn line_of<S: Scalar>(x: &S, role: ChartRole) -> S {
    match role {
        ChartRole::Infinity => x.lift(Complex64::new(1.0, 0.0)) / x.clone(),
        _ => x.clone(),
    }
}

/// Running state of the product.
struct Acc {
    /// Σ ±Log(1 + u_n)/b^{n+1} plus chart-switch corrections.
    log: Complex64,
    ell0: Complex64,
    n: usize,
}

enum Step<S> {
    Done(BottcherResult),
    Promote { chart: usize, x: S, y: S },
}

fn bound_of(value: Complex64, b: u32, n: usize) -> f64 {
    let tail = LN_2 / ((b as f64).powi(n as i32) * (b as f64 - 1.0));
    value.norm() * tail.exp_m1()
}

fn needs_promotion(v: Complex64) -> bool {
    let a = v.norm();
    a != 0.0 && !(1e-100..=1e100).contains(&a)
}

#[allow(clippy::too_many_arguments)]
fn run<S: Scalar>(
    p: &Prepared,
    mut ci: usize,
    mut x: S,
    mut y: S,
    acc: &mut Acc,
    tol: f64,
    n_max: usize,
    opts: &PhiOptions,
    promotable: bool,
) -> Result<Step<S>, BottcherError> {
    let b = p.map.b;
    let bf = b as f64;
    loop {
        let value = acc.ell0 * acc.log.exp();
        if y.is_zero() {
            return Ok(Step::Done(BottcherResult { value, truncation_bound: 0.0, terms: acc.n + 1 }));
        }
        if acc.n > 0 {
            let bound = bound_of(value, b, acc.n);
            if bound <= tol {
                return Ok(Step::Done(BottcherResult { value, truncation_bound: bound, terms: acc.n + 1 }));
            }
            if acc.n >= n_max {
                return Err(BottcherError::NotConverged { n_max, bound });
            }
        }
        if promotable && (needs_promotion(x.to_c64()) || needs_promotion(y.to_c64())) {
            return Ok(Step::Promote { chart: ci, x, y });
        }
        let c = &p.charts[ci];
        let u = guard_u(c, b, &x, &y);
        if !(u.norm() < 0.5) {
            return Err(BottcherError::GuardViolation { step: acc.n, value: u.norm() });
        }
        let l = log1p(u) / bf.powi(acc.n as i32 + 1);
        acc.log += if c.role == ChartRole::Infinity { -l } else { l };
        let (nx, ny) = c.f.eval_scalar(&x, &y);
        x = nx;
        y = ny;
        acc.n += 1;
        if let Some(region) = &opts.region {
            let pt = ChartPoint::new(c.id, x.to_c64(), y.to_c64());
            if pt.is_finite() && !in_omega(p.map, &pt, region) {
                return Err(BottcherError::OrbitLeftRegion { step: acc.n });
            }
        }
        // hysteresis: leave a chart only once |ℓ| is well past the unit circle
        let ell = line_of(&x, c.role).abs();
        let other = match c.role {
            ChartRole::Zero if ell > 2.0 => p.chart(ChartRole::Infinity),
            ChartRole::Infinity if ell < 0.5 => p.chart(ChartRole::Zero),
            _ => None,
        };
        if let Some(o) = other {
            if let Some(t) = p.map.atlas.find(c.id, o.id) {
                let [n1, d1, n2, d2] = [t.formula.num1(), t.formula.den1(), t.formula.num2(), t.formula.den2()]
                    .map(|q| q.eval_scalar(&x, &y));
                if !d1.is_zero() && !d2.is_zero() {
                    let (ox, oy) = (n1 / d1, n2 / d2);
                    // (ℓ_B/ℓ_A)^{1/b^n} keeps the accumulated root in the new chart's normalization
                    let ratio = (line_of(&ox, o.role) / line_of(&x, c.role)).to_c64();
                    acc.log += ratio.ln() / bf.powi(acc.n as i32);
                    x = ox;
                    y = oy;
                    ci = p.charts.iter().position(|k| k.id == o.id).expect("prepared chart");
                }
            }
        }
    }
}

/// The co-dimension-1 Böttcher function at x.
pub fn phi(map: &MapSpec, x: &ChartPoint, tol: f64, n_max: usize) -> Result<BottcherResult, BottcherError> {
    phi_with(map, x, tol, n_max, &PhiOptions::default())
}

pub fn phi_with(
    map: &MapSpec,
    x: &ChartPoint,
    tol: f64,
    n_max: usize,
    opts: &PhiOptions,
) -> Result<BottcherResult, BottcherError> {
    if map.a < map.b && !opts.experimental {
        return Err(BottcherError::RequiresExperimental { name: map.name.clone(), a: map.a, b: map.b });
    }
    let (start, role) = line_chart(map, x)?;
    if let Some(region) = &opts.region {
        if !in_omega(map, &start, region) {
            return Err(BottcherError::OrbitLeftRegion { step: 0 });
        }
    }
    let p = Prepared::new(map);
    let ci = p.charts.iter().position(|c| c.id == start.chart).expect("normal-form chart");
    let mut acc = Acc { log: Complex64::new(0.0, 0.0), ell0: line_coord(&start, role), n: 0 };
    match run(&p, ci, start.c1, start.c2, &mut acc, tol, n_max, opts, true)? {
        Step::Done(r) => Ok(r),
        Step::Promote { chart, x, y } => {
            match run(&p, chart, ExtC::new(x), ExtC::new(y), &mut acc, tol, n_max, opts, false)? {
                Step::Done(r) => Ok(r),
                Step::Promote { .. } => unreachable!("extended run never promotes"),
            }
        }
    }
}

/// ψ = log|φ|, with the bound carried through the logarithm.
pub fn psi(map: &MapSpec, x: &ChartPoint, tol: f64) -> Result<PsiResult, BottcherError> {
    psi_with(map, x, tol, 200, &PhiOptions::default())
}

pub fn psi_with(
    map: &MapSpec,
    x: &ChartPoint,
    tol: f64,
    n_max: usize,
    opts: &PhiOptions,
) -> Result<PsiResult, BottcherError> {
    let r = phi_with(map, x, tol, n_max, opts)?;
    let m = r.value.norm();
    let bound = if r.truncation_bound == 0.0 { 0.0 } else { -(1.0 - r.truncation_bound / m).ln() };
    Ok(PsiResult { value: m.ln(), bound, terms: r.terms })
}

/// Contribution of the first factor only; the quantity the guard bounds.
pub fn guard_value(map: &MapSpec, x: &ChartPoint) -> Result<f64, BottcherError> {
    let (p, _) = line_chart(map, x)?;
    let prep = Prepared::new(map);
    let c = prep.charts.iter().find(|c| c.id == p.chart).expect("normal-form chart");
    Ok(guard_u(c, map.b, &p.c1, &p.c2).norm())
}
