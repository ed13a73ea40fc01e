use crate::error::MapError;
use crate::spec::MapSpec;
use circlelab_core::{to_chart, ChartId, ChartPoint, Complex64, Scalar};
use serde::{Deserialize, Serialize};

/// Re-chart the image when a coordinate exceeds this.
pub const COMFORT_RADIUS: f64 = 10.0;
/// Denominators below this trigger evaluation in another chart.
pub const DEN_MARGIN: f64 = 1e-6;
/// Distance to an indeterminacy point that refuses evaluation.
pub const INDETERMINACY_MARGIN: f64 = 1e-8;

fn check_indeterminacy(map: &MapSpec, x: &ChartPoint) -> Result<(), MapError> {
    for s in map.indeterminacy_points() {
        let here = if s.point.chart == x.chart { Ok(*x) } else { to_chart(x, s.point.chart, &map.atlas) };
        if let Ok(y) = here {
            if y.dist(&s.point) < INDETERMINACY_MARGIN {
                return Err(MapError::Indeterminacy { label: s.label.clone(), margin: INDETERMINACY_MARGIN });
            }
        }
    }
    Ok(())
}

/// Chart formula at x, without any re-charting. Fails on small denominators.
pub fn eval_strict(map: &MapSpec, x: &ChartPoint) -> Result<ChartPoint, MapError> {
    if !x.is_finite() {
        return Err(circlelab_core::CoreError::NonFinite.into());
    }
    let f = &map.formula(x.chart)?.formula;
    let [n1, d1, n2, d2] = f.parts(x.c1, x.c2);
    let den = d1.norm().min(d2.norm());
    if den < DEN_MARGIN {
        // both numerator and denominator vanishing is an indeterminate form
        if (n1.norm() < DEN_MARGIN && d1.norm() < DEN_MARGIN) || (n2.norm() < DEN_MARGIN && d2.norm() < DEN_MARGIN) {
            return Err(MapError::Indeterminacy { label: format!("0/0 in {}", x.chart), margin: DEN_MARGIN });
        }
        return Err(MapError::DenominatorUnderflow(den));
    }
    let y = ChartPoint::new(x.chart, n1 / d1, n2 / d2);
    if !y.is_finite() {
        return Err(MapError::DenominatorUnderflow(den));
    }
    Ok(y)
}

/// Image of x, staying in x's chart unless the formula is singular there.
pub fn eval_in_chart(map: &MapSpec, x: &ChartPoint) -> Result<ChartPoint, MapError> {
    check_indeterminacy(map, x)?;
    match eval_strict(map, x) {
        Ok(y) => Ok(y),
        Err(MapError::DenominatorUnderflow(den)) => {
            for c in &map.charts {
                if c.chart == x.chart {
                    continue;
                }
                if let Ok(x2) = to_chart(x, c.chart, &map.atlas) {
                    if let Ok(y) = eval_strict(map, &x2) {
                        return Ok(y);
                    }
                }
            }
            Err(MapError::DenominatorUnderflow(den))
        }
        Err(e) => Err(e),
    }
}

/// Re-express y in the declared chart with the smallest coordinates.
pub fn comfortable(map: &MapSpec, y: ChartPoint) -> ChartPoint {
    if y.max_abs() <= COMFORT_RADIUS {
        return y;
    }
    let mut best = y;
    for c in &map.charts {
        if let Ok(z) = to_chart(&y, c.chart, &map.atlas) {
            if z.max_abs() < best.max_abs() {
                best = z;
            }
        }
    }
    best
}

/// Image of x, re-charted when it leaves the comfortable range.
pub fn eval(map: &MapSpec, x: &ChartPoint) -> Result<ChartPoint, MapError> {
    Ok(comfortable(map, eval_in_chart(map, x)?))
}

/// Chart formula in an arbitrary scalar type (no singularity checks).
pub fn eval_scalar<S: Scalar>(map: &MapSpec, chart: ChartId, c1: &S, c2: &S) -> Result<(S, S), MapError> {
    Ok(map.formula(chart)?.formula.eval_scalar(c1, c2))
}

/// Symbolic Jacobian of the chart formula at x.
pub fn jacobian(map: &MapSpec, x: &ChartPoint) -> Result<[[Complex64; 2]; 2], MapError> {
    check_indeterminacy(map, x)?;
    eval_strict(map, x)?;
    Ok(map.formula(x.chart)?.formula.jacobian(x.c1, x.c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    BudgetExhausted,
    Escaped,
    ChartSwitched,
    Indeterminacy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub points: Vec<ChartPoint>,
    pub n: usize,
    pub terminal: Terminal,
}

/// Forward orbit in the starting chart. When an iterate leaves
/// |coordinate| <= escape_radius the orbit stops: with `chart-switched` (and
/// the re-charted iterate appended) if another chart holds it, `escaped`
/// otherwise. Evaluation failures become the `indeterminacy` status.
pub fn orbit(map: &MapSpec, x: &ChartPoint, n_max: usize, escape_radius: f64) -> OrbitRecord {
    let mut points = vec![*x];
    let mut cur = *x;
    for _ in 0..n_max.max(1) {
        let y = match eval_in_chart(map, &cur) {
            Ok(y) => y,
            Err(_) => return OrbitRecord { n: points.len() - 1, points, terminal: Terminal::Indeterminacy },
        };
        if y.max_abs() > escape_radius {
            let alt = comfortable(map, y);
            if alt.chart != y.chart && alt.max_abs() <= escape_radius {
                points.push(alt);
                return OrbitRecord { n: points.len() - 1, points, terminal: Terminal::ChartSwitched };
            }
            points.push(y);
            return OrbitRecord { n: points.len() - 1, points, terminal: Terminal::Escaped };
        }
        points.push(y);
        cur = y;
    }
    OrbitRecord { n: points.len() - 1, points, terminal: Terminal::BudgetExhausted }
}
