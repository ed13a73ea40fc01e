use crate::error::MapError;
use circlelab_core::exact::poly_to_exact;
use circlelab_core::{Atlas, ChartId, ChartPoint, Complex64, GaussRat, Poly2, RationalPair};
use num_traits::One;
use serde::{Deserialize, Serialize};

/// How a chart sits relative to the invariant line {second coordinate = 0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartRole {
    /// Line coordinate ℓ = c1; the unit circle is |c1| = 1.
    Zero,
    /// Line coordinate ℓ = 1/c1.
    Infinity,
    /// Any other chart (no normal-form claims).
    Aux,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChartFormula {
    pub chart: ChartId,
    pub role: ChartRole,
    pub formula: RationalPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialKind {
    Fixed,
    Indeterminacy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecialPoint {
    pub label: String,
    pub kind: SpecialKind,
    pub point: ChartPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttractorKind {
    PInfinity,
    Other,
}

/// A basin disc used by orbit classification: max-norm ball in `center.chart`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Attractor {
    pub kind: AttractorKind,
    pub center: ChartPoint,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSpec {
    pub name: String,
    pub a: u32,
    pub b: u32,
    pub topological_degree: Option<u32>,
    pub invariant_circle: String,
    pub charts: Vec<ChartFormula>,
    pub atlas: Atlas,
    #[serde(default)]
    pub special_points: Vec<SpecialPoint>,
    #[serde(default)]
    pub attractors: Vec<Attractor>,
    /// Chart in which preimages are solved, when it differs from the target's.
    #[serde(default)]
    pub solve_chart: Option<ChartId>,
}

impl MapSpec {
    pub fn formula(&self, chart: ChartId) -> Result<&ChartFormula, MapError> {
        self.charts
            .iter()
            .find(|c| c.chart == chart)
            .ok_or_else(|| MapError::UnknownChart { map: self.name.clone(), chart })
    }

    pub fn chart_with_role(&self, role: ChartRole) -> Option<&ChartFormula> {
        self.charts.iter().find(|c| c.role == role)
    }

    /// The normal-form chart with line coordinate c1.
    pub fn zero_chart(&self) -> ChartId {
        self.chart_with_role(ChartRole::Zero).map(|c| c.chart).expect("validated map has a zero chart")
    }

    pub fn infinity_chart(&self) -> Option<ChartId> {
        self.chart_with_role(ChartRole::Infinity).map(|c| c.chart)
    }

    pub fn role(&self, chart: ChartId) -> Option<ChartRole> {
        self.charts.iter().find(|c| c.chart == chart).map(|c| c.role)
    }

    pub fn special(&self, label: &str) -> Option<&SpecialPoint> {
        self.special_points.iter().find(|s| s.label == label)
    }

    pub fn indeterminacy_points(&self) -> impl Iterator<Item = &SpecialPoint> {
        self.special_points.iter().filter(|s| s.kind == SpecialKind::Indeterminacy)
    }

    /// Second coordinate is w^a and the first is polynomial, in the zero chart.
    pub fn is_skew(&self) -> bool {
        let Some(f) = self.chart_with_role(ChartRole::Zero) else { return false };
        let r = &f.formula;
        let wa = Poly2::monomial(0, self.a, Complex64::new(1.0, 0.0));
        r.is_polynomial()
            && r.den1().coeff(0, 0) == Complex64::new(1.0, 0.0)
            && r.den2().coeff(0, 0) == Complex64::new(1.0, 0.0)
            && *r.num2() == wa
    }

    pub fn from_json(s: &str) -> Result<MapSpec, MapError> {
        let m: MapSpec = serde_json::from_str(s).map_err(|e| MapError::InvalidSpec(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map spec serializes")
    }

    /// Structural checks plus the exact normal-form checks on the line.
    pub fn validate(&self) -> Result<(), MapError> {
        let bad = |s: String| Err(MapError::InvalidSpec(s));
        if self.a < 1 || self.b < 2 {
            return bad(format!("need a >= 1 and b >= 2, got a={} b={}", self.a, self.b));
        }
        if self.chart_with_role(ChartRole::Zero).is_none() {
            return bad("no chart with role 'zero'".into());
        }
        for (k, c) in self.charts.iter().enumerate() {
            if self.charts[..k].iter().any(|d| d.chart == c.chart) {
                return bad(format!("chart {} declared twice", c.chart));
            }
        }
        for t in &self.atlas.transitions {
            if self.formula(t.from).is_err() || self.formula(t.to).is_err() {
                return bad(format!("transition {} -> {} between undeclared charts", t.from, t.to));
            }
        }
        for s in &self.special_points {
            self.formula(s.point.chart)?;
        }
        for c in &self.charts {
            if c.role != ChartRole::Aux {
                check_normal_form(&c.formula, self.a, self.b)
                    .map_err(|e| MapError::InvalidSpec(format!("chart {}: {e}", c.chart)))?;
            }
        }
        Ok(())
    }
}

/// On {y = 0}: num1 = x^b den1 exactly, num2 vanishes to order >= a, den2 does not vanish.
pub fn check_normal_form(r: &RationalPair, a: u32, b: u32) -> Result<(), String> {
    let n1 = poly_to_exact(r.num1()).map_err(|e| e.to_string())?;
    let d1 = poly_to_exact(r.den1()).map_err(|e| e.to_string())?;
    let xb = Poly2::<GaussRat>::monomial(b, 0, GaussRat::one());
    let diff = &n1 - &(&xb * &d1);
    if !diff.restrict_y0().is_zero() {
        return Err(format!("first coordinate is not x^{b} on the line"));
    }
    if d1.restrict_y0().is_zero() {
        return Err("first denominator vanishes on the line".into());
    }
    let n2 = poly_to_exact(r.num2()).map_err(|e| e.to_string())?;
    let d2 = poly_to_exact(r.den2()).map_err(|e| e.to_string())?;
    if d2.restrict_y0().is_zero() {
        return Err("second denominator vanishes on the line".into());
    }
    match n2.y_valuation() {
        Some(v) if v >= a => Ok(()),
        None => Ok(()),
        Some(v) => Err(format!("second coordinate vanishes to order {v} < a = {a}")),
    }
}

/// The exact polynomial num1 - x^b den1, which is divisible by y.
pub fn guard_numerator(r: &RationalPair, b: u32) -> Poly2 {
    let xb = Poly2::monomial(b, 0, Complex64::new(1.0, 0.0));
    let p = r.num1() - &(&xb * r.den1());
    debug_assert!(p.terms().iter().all(|t| t.1 > 0) || p.is_zero());
    p
}
