//! ℛ on the Lee-Yang cylinder C = {|z| = 1, t ∈ [0, 1]}. With z = e^{iθ},
//!   z' = (z² + t²)/(z̄² + t²)  (so |z'| = 1),
//!   t' = 4t² cos²θ / (t⁴ + 2t² cos 2θ + 1)  ∈ [0, 1].
//! On t = 0 the map is θ ↦ 4θ.

use crate::error::LeeYangError;
use circlelab_core::precision::big_c;
use circlelab_core::{ChartId, ChartPoint, Complex64, CounterRng, Scalar};
use circlelab_maps::{catalog, eval, eval_scalar};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub const CYLINDER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub theta: f64,
    pub t: f64,
}

pub fn wrap_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed circular difference a − b in (−π, π].
pub fn circ_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

impl CylinderPoint {
    pub fn new(theta: f64, t: f64) -> Result<Self, LeeYangError> {
        if !theta.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(LeeYangError::InvalidPoint { theta, t });
        }
        Ok(CylinderPoint { theta: wrap_angle(theta), t })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    pub fn to_chart_point(&self) -> ChartPoint {
        ChartPoint::new(ChartId::PhysicalZt, self.z(), Complex64::new(self.t, 0.0))
    }
}

/// One step on lifted angles: Θ' = 4Θ + 2 arg(1 + t² e^{−2iΘ}), continuous in
/// Θ for t < 1, so orbits can be compared without wrapping.
pub fn lift_step(theta: f64, t: f64) -> (f64, f64) {
    let t2 = t * t;
    let c2 = (2.0 * theta).cos();
    let s2 = (2.0 * theta).sin();
    let th = 4.0 * theta + 2.0 * (-t2 * s2).atan2(1.0 + t2 * c2);
    let ct = theta.cos();
    let den = t2 * t2 + 2.0 * t2 * c2 + 1.0;
    let tn = if t == 0.0 { 0.0 } else { (4.0 * t2 * ct * ct / den).clamp(0.0, 1.0) };
    (th, tn)
}

/// ℛ|C in real coordinates.
pub fn cyl_step(x: CylinderPoint) -> CylinderPoint {
    let (th, t) = lift_step(x.theta, x.t);
    CylinderPoint { theta: wrap_angle(th), t }
}

/// ℛ|C evaluated with the complex physical-chart formula and checked to stay
/// on the cylinder; on drift the point is re-evaluated at 200 bits.
pub fn cyl_eval(x: CylinderPoint) -> Result<CylinderPoint, LeeYangError> {
    if x.t == 0.0 {
        return Ok(CylinderPoint { theta: wrap_angle(4.0 * x.theta), t: 0.0 });
    }
    let r = catalog::cached("R")?;
    let y = eval(r, &x.to_chart_point())?;
    if let Ok(p) = on_cylinder(y.c1, y.c2) {
        return Ok(p);
    }
    let (z, t) = eval_scalar(r, ChartId::PhysicalZt, &big_c(x.z(), 200), &big_c(Complex64::new(x.t, 0.0), 200))?;
    on_cylinder(z.to_c64(), t.to_c64())
}

/// `n` steps of ℛ|C at `bits` bits. On |z| = 1 the map reads
/// z′ = (z² + t²)/(z̄² + t²), t′ = (2Re z² + 2)/(2Re z² + t² + t⁻²), which
/// keeps |z| = 1 up to the working precision.
pub fn cyl_orbit_big(x: CylinderPoint, n: usize, bits: usize) -> CylinderPoint {
    let z0 = big_c(x.z(), bits);
    let m = (z0.clone() * z0.clone().conj()).sqrt();
    let mut z = z0 / m;
    let mut t = big_c(Complex64::new(x.t, 0.0), bits);
    let one = t.lift(Complex64::new(1.0, 0.0));
    let two = t.lift(Complex64::new(2.0, 0.0));
    for _ in 0..n {
        if t.is_zero() {
            let z2 = z.clone() * z.clone();
            z = z2.clone() * z2;
            continue;
        }
        let z2 = z.clone() * z.clone();
        let t2 = t.clone() * t.clone();
        let c = z2.clone() + z2.clone().conj();
        z = (z2.clone() + t2.clone()) / (z2.conj() + t2.clone());
        t = (c.clone() + two.clone()) / (c + t2.clone() + one.clone() / t2);
        t.im = t.re.clone() - t.re.clone();
    }
    let (z, t) = (z.to_c64(), t.to_c64());
    CylinderPoint { theta: wrap_angle(z.arg()), t: t.re.clamp(0.0, 1.0) }
}

fn on_cylinder(z: Complex64, t: Complex64) -> Result<CylinderPoint, LeeYangError> {
    let modulus_err = (z.norm() - 1.0).abs();
    let ok = modulus_err <= CYLINDER_TOL
        && t.im.abs() <= CYLINDER_TOL
        && t.re >= -CYLINDER_TOL
        && t.re <= 1.0 + CYLINDER_TOL;
    if !ok {
        return Err(LeeYangError::Drift { modulus_err, t: t.re });
    }
    Ok(CylinderPoint { theta: wrap_angle(z.arg()), t: t.re.clamp(0.0, 1.0) })
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    pub max_modulus_err: f64,
    pub max_t_im: f64,
    pub t_range: (f64, f64),
    /// Largest disagreement between the complex and the real-coordinate maps.
    pub max_formula_gap: f64,
    pub failures: usize,
}

/// Random points with t ∈ (0, 1], mapped with the complex formula.
pub fn invariance_check(n: usize, seed: u64) -> Result<InvarianceReport, LeeYangError> {
    let r = catalog::cached("R")?;
    let rng = CounterRng::new(seed);
    let rows: Vec<Option<(f64, f64, f64, f64)>> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut g = rng.stream(i);
            let x = CylinderPoint { theta: TAU * g.gen::<f64>(), t: 1.0 - g.gen::<f64>() };
            let y = eval(r, &x.to_chart_point()).ok()?;
            let fast = cyl_step(x);
            let gap = circ_diff(y.c1.arg(), fast.theta).abs().max((y.c2.re - fast.t).abs());
            Some(((y.c1.norm() - 1.0).abs(), y.c2.im.abs(), y.c2.re, gap))
        })
        .collect();
    let mut rep = InvarianceReport {
        samples: n,
        max_modulus_err: 0.0,
        max_t_im: 0.0,
        t_range: (f64::INFINITY, f64::NEG_INFINITY),
        max_formula_gap: 0.0,
        failures: 0,
    };
    for row in rows {
        match row {
            Some((m, im, t, gap)) => {
                rep.max_modulus_err = rep.max_modulus_err.max(m);
                rep.max_t_im = rep.max_t_im.max(im);
                rep.t_range = (rep.t_range.0.min(t), rep.t_range.1.max(t));
                rep.max_formula_gap = rep.max_formula_gap.max(gap);
            }
            None => rep.failures += 1,
        }
    }
    Ok(rep)
}

impl InvarianceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.failures == 0
            && self.max_modulus_err <= tol
            && self.max_t_im <= tol
            && self.t_range.0 >= -tol
            && self.t_range.1 <= 1.0 + tol
    }
}
