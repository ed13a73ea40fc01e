use crate::error::CoreError;
use crate::rational::RationalPair;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Below this |denominator| a transition refuses to produce a point.
pub const SINGULAR_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartId {
    /// (z, w) or (x, y): the invariant line is the second coordinate = 0.
    AffineZero,
    /// Chart around the far end of the invariant line, e.g. (1/z, w/z).
    AffineInfinity,
    /// (z, t) physical coordinates of the renormalization map.
    PhysicalZt,
    /// (p, q) = ((1 - t)/z, t/z), centred on the fixed point p-infinity.
    PqAtInfinity,
    /// (zeta, tau) = (1/x, x y), blow-up of the point at infinity.
    BlowupZetaTau,
    /// (z, w) = (y/(y - 1), x) for the Newton map.
    Cayley,
    /// (1/z, w) companion of the Cayley chart.
    CayleyInfinity,
}

impl ChartId {
    pub const ALL: [ChartId; 7] = [
        ChartId::AffineZero,
        ChartId::AffineInfinity,
        ChartId::PhysicalZt,
        ChartId::PqAtInfinity,
        ChartId::BlowupZetaTau,
        ChartId::Cayley,
        ChartId::CayleyInfinity,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ChartId::AffineZero => "affine-zero",
            ChartId::AffineInfinity => "affine-infinity",
            ChartId::PhysicalZt => "physical-zt",
            ChartId::PqAtInfinity => "pq-at-infinity",
            ChartId::BlowupZetaTau => "blowup-zeta-tau",
            ChartId::Cayley => "cayley",
            ChartId::CayleyInfinity => "cayley-infinity",
        }
    }

    pub fn parse(s: &str) -> Option<ChartId> {
        ChartId::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: ChartId,
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ChartPoint {
    pub fn new(chart: ChartId, c1: Complex64, c2: Complex64) -> Self {
        ChartPoint { chart, c1, c2 }
    }

    pub fn real(chart: ChartId, c1: f64, c2: f64) -> Self {
        ChartPoint::new(chart, Complex64::new(c1, 0.0), Complex64::new(c2, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    /// Max-norm distance; only meaningful for points in the same chart.
    pub fn dist(&self, other: &ChartPoint) -> f64 {
        (self.c1 - other.c1).norm().max((self.c2 - other.c2).norm())
    }

    pub fn max_abs(&self) -> f64 {
        self.c1.norm().max(self.c2.norm())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transition {
    pub from: ChartId,
    pub to: ChartId,
    pub formula: RationalPair,
}

/// The finite set of chart transitions a map declares.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Atlas {
    pub transitions: Vec<Transition>,
}

impl Atlas {
    pub fn find(&self, from: ChartId, to: ChartId) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.from == from && t.to == to)
    }

    pub fn declares(&self, from: ChartId, to: ChartId) -> bool {
        from == to || self.find(from, to).is_some()
    }
}

/// Re-express `point` in `target`. Identity when the chart already matches.
pub fn to_chart(point: &ChartPoint, target: ChartId, atlas: &Atlas) -> Result<ChartPoint, CoreError> {
    to_chart_with_margin(point, target, atlas, SINGULAR_MARGIN)
}

pub fn to_chart_with_margin(
    point: &ChartPoint,
    target: ChartId,
    atlas: &Atlas,
    margin: f64,
) -> Result<ChartPoint, CoreError> {
    if !point.is_finite() {
        return Err(CoreError::NonFinite);
    }
    if point.chart == target {
        return Ok(*point);
    }
    let tr =
        atlas.find(point.chart, target).ok_or(CoreError::UndeclaredTransition { from: point.chart, to: target })?;
    let [n1, d1, n2, d2] = tr.formula.parts(point.c1, point.c2);
    let den = d1.norm().min(d2.norm());
    if den < margin {
        return Err(CoreError::SingularLocus { from: point.chart, to: target, den });
    }
    let out = ChartPoint::new(target, n1 / d1, n2 / d2);
    if !out.is_finite() {
        return Err(CoreError::NonFinite);
    }
    Ok(out)
}
