use circlelab_core::ChartPoint;
use circlelab_maps::{eval, to_chart, AttractorKind, ChartRole, MapSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitClass {
    ToCircle,
    ToPInfinity,
    ToOtherAttractor,
    Undecided,
}

impl OrbitClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitClass::ToCircle => "to-circle",
            OrbitClass::ToPInfinity => "to-p-infinity",
            OrbitClass::ToOtherAttractor => "to-other-attractor",
            OrbitClass::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub budget: usize,
    /// Radius of the basin discs; overrides the catalog radii when set.
    pub disc_radius: Option<f64>,
    /// After the budget, an orbit this close to the circle counts as to-circle.
    pub circle_distance: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { budget: 200, disc_radius: None, circle_distance: 0.05 }
    }
}

/// max(| |ℓ| − 1 |, |transverse|) in a normal-form chart, where ℓ is the
/// line coordinate; infinite if no such chart holds x.
pub fn circle_distance(map: &MapSpec, x: &ChartPoint) -> f64 {
    let mut best = f64::INFINITY;
    for c in &map.charts {
        let y = if c.chart == x.chart { Ok(*x) } else { to_chart(x, c.chart, map) };
        let Ok(y) = y else { continue };
        let l = match c.role {
            ChartRole::Zero => y.c1.norm(),
            ChartRole::Infinity => 1.0 / y.c1.norm(),
            ChartRole::Aux => continue,
        };
        best = best.min((l - 1.0).abs().max(y.c2.norm()));
    }
    best
}

/// Transverse coordinate exactly zero and |ℓ| = 1 up to a few ulps.
fn on_circle(map: &MapSpec, x: &ChartPoint) -> bool {
    match map.role(x.chart) {
        Some(ChartRole::Zero) | Some(ChartRole::Infinity) => {
            x.c2.norm() == 0.0 && (x.c1.norm() - 1.0).abs() <= 4.0 * f64::EPSILON
        }
        _ => false,
    }
}

fn in_disc(map: &MapSpec, x: &ChartPoint, opts: &ClassifyOptions) -> Option<AttractorKind> {
    for a in &map.attractors {
        let y = if a.center.chart == x.chart { Ok(*x) } else { to_chart(x, a.center.chart, map) };
        if let Ok(y) = y {
            let r = opts.disc_radius.unwrap_or(a.radius);
            if (y.c1 - a.center.c1).norm() < r && (y.c2 - a.center.c2).norm() < r {
                return Some(a.kind);
            }
        }
    }
    None
}

/// One iterate; near an indeterminacy point of the current chart the same
/// point is retried in the map's other charts.
fn step(map: &MapSpec, x: &ChartPoint) -> Option<ChartPoint> {
    if let Ok(y) = eval(map, x) {
        if y.is_finite() {
            return Some(y);
        }
    }
    map.charts.iter().filter(|c| c.chart != x.chart).find_map(|c| {
        let y = eval(map, &to_chart(x, c.chart, map).ok()?).ok()?;
        y.is_finite().then_some(y)
    })
}

/// Follow the orbit until it enters a basin disc; after the budget it is
/// to-circle when within the circle distance, otherwise undecided.
/// Evaluation failures in every chart also give undecided.
pub fn classify_with(map: &MapSpec, x: &ChartPoint, opts: &ClassifyOptions) -> OrbitClass {
    // Exactly on the circle the orbit is known; iterating would let rounding
    // (multiplied by b each step) push it off.
    if on_circle(map, x) {
        return OrbitClass::ToCircle;
    }
    let mut cur = *x;
    for _ in 0..=opts.budget {
        match in_disc(map, &cur, opts) {
            Some(AttractorKind::PInfinity) => return OrbitClass::ToPInfinity,
            Some(AttractorKind::Other) => return OrbitClass::ToOtherAttractor,
            None => {}
        }
        cur = match step(map, &cur) {
            Some(y) => y,
            None => return OrbitClass::Undecided,
        };
    }
    if circle_distance(map, &cur) <= opts.circle_distance {
        OrbitClass::ToCircle
    } else {
        OrbitClass::Undecided
    }
}

pub fn classify(map: &MapSpec, x: &ChartPoint, budget: usize) -> OrbitClass {
    classify_with(map, x, &ClassifyOptions { budget, ..Default::default() })
}
