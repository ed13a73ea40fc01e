//! Leaves of the central foliation of the cylinder. Below the fixed point of
//! t ↦ 4t²/(1+t²)² on θ = 0 (t ≈ 0.2956) every orbit falls into the base
//! circle t = 0, and the leaf through (θ₀, 0) is the set of points whose
//! lifted angle shadows 4ⁿθ₀.

use crate::cylinder::{lift_step, wrap_angle};
use crate::error::LeeYangError;
use serde::{Deserialize, Serialize};

/// Largest leaf height accepted.
pub const VALIDATED_T_MAX: f64 = 0.25;
pub const MAX_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolonomyOptions {
    /// Iterates used by the shadowing distance.
    pub n_iter: usize,
    /// Width of the corrector window around the predicted angle.
    pub window: f64,
}

impl Default for HolonomyOptions {
    fn default() -> Self {
        HolonomyOptions { n_iter: 12, window: 0.2 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Leaf {
    pub theta0: f64,
    /// (t, θ) starting at (0, θ₀); θ is a lift, continuous along the leaf.
    pub samples: Vec<(f64, f64)>,
    pub tol: f64,
}

impl Leaf {
    pub fn end(&self) -> (f64, f64) {
        *self.samples.last().expect("a leaf has its base point")
    }
}

/// Lifted shadowing distance (Θ_N(θ, t) − 4^N θ₀)/4^N. Multiplying by 4 is
/// exact, so the reference orbit carries no rounding.
pub fn shadow_distance(theta: f64, t: f64, theta0: f64, n_iter: usize) -> f64 {
    let (mut th, mut s) = (theta, t);
    let mut r = theta0;
    let mut scale = 1.0;
    for _ in 0..n_iter {
        (th, s) = lift_step(th, s);
        r *= 4.0;
        scale *= 4.0;
    }
    (th - r) / scale
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimum of f on [a, b].
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}

pub fn holonomy_leaf(theta0: f64, t_max: f64, step: f64, tol: f64) -> Result<Leaf, LeeYangError> {
    holonomy_leaf_with(theta0, t_max, step, tol, &HolonomyOptions::default())
}

pub fn holonomy_leaf_with(
    theta0: f64,
    t_max: f64,
    step: f64,
    tol: f64,
    opts: &HolonomyOptions,
) -> Result<Leaf, LeeYangError> {
    if !(0.0..=VALIDATED_T_MAX).contains(&t_max) {
        return Err(LeeYangError::InvalidParams(format!("t_max must lie in [0, {VALIDATED_T_MAX}], got {t_max}")));
    }
    if !(step > 0.0 && step <= MAX_STEP) || !(tol > 0.0) || !theta0.is_finite() {
        return Err(LeeYangError::InvalidParams(format!("need 0 < step <= {MAX_STEP}, tol > 0, got {step}, {tol}")));
    }
    let mut samples = vec![(0.0, theta0)];
    let n_steps = (t_max / step).ceil() as usize;
    let half = 0.5 * opts.window;
    for i in 1..=n_steps {
        let t = if i == n_steps { t_max } else { i as f64 * step };
        let pred = samples.last().unwrap().1;
        let th = golden(|x| shadow_distance(x, t, theta0, opts.n_iter).abs(), pred - half, pred + half, tol);
        if (th - pred).abs() >= half - 2.0 * tol {
            return Err(LeeYangError::WindowExhausted { theta0, t });
        }
        samples.push((t, th));
    }
    Ok(Leaf { theta0, samples, tol })
}

/// Whether `arrival` lists angles in the same circular order as
/// `departure`, which must be increasing within one turn: reduced to
/// [0, 2π), a cyclically sorted sequence descends at most once.
pub fn circular_order_preserved(departure: &[f64], arrival: &[f64]) -> bool {
    if departure.len() != arrival.len() || departure.windows(2).any(|w| w[1] <= w[0]) {
        return false;
    }
    let a: Vec<f64> = arrival.iter().map(|&x| wrap_angle(x)).collect();
    let n = a.len();
    let descents = (0..n).filter(|&i| a[(i + 1) % n] <= a[i]).count();
    n < 2 || descents <= 1
}
