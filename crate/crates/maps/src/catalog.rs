//! Built-in maps. Every formula below was checked symbolically against the
//! defining relations (chart changes composed with the map).

use crate::error::MapError;
use crate::spec::{Attractor, AttractorKind, ChartFormula, ChartRole, MapSpec, SpecialKind, SpecialPoint};
use circlelab_core::{Atlas, ChartId, ChartPoint, Complex64, Poly2, RationalPair, Transition};

pub const NAMES: [&str; 5] = ["R", "g", "f", "m", "N"];

/// Default parameter of the Newton map.
pub const NEWTON_B: f64 = 0.5;

fn p(terms: &[(u32, u32, f64)]) -> Poly2 {
    Poly2::from_terms(terms.iter().map(|&(i, j, c)| (i, j, Complex64::new(c, 0.0))))
}

fn one() -> Poly2 {
    p(&[(0, 0, 1.0)])
}

fn rp(n1: Poly2, d1: Poly2, n2: Poly2, d2: Poly2) -> RationalPair {
    RationalPair::new(n1, d1, n2, d2).expect("catalog formula is reduced")
}

fn tr(from: ChartId, to: ChartId, f: RationalPair) -> Transition {
    Transition { from, to, formula: f }
}

fn special(label: &str, kind: SpecialKind, chart: ChartId, c1: Complex64, c2: Complex64) -> SpecialPoint {
    SpecialPoint { label: label.into(), kind, point: ChartPoint::new(chart, c1, c2) }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn basin(kind: AttractorKind, chart: ChartId, c1: f64, c2: f64) -> Attractor {
    Attractor { kind, center: ChartPoint::real(chart, c1, c2), radius: 1e-3 }
}

/// Canonical catalog name for a user-facing alias.
pub fn canonical(name: &str) -> Result<&'static str, MapError> {
    match name {
        "R" | "r" | "renormalization" => Ok("R"),
        "g" => Ok("g"),
        "f" => Ok("f"),
        "m" => Ok("m"),
        "N" | "n" | "newton" => Ok("N"),
        _ => Err(MapError::UnknownMap(name.into())),
    }
}

pub fn by_name(name: &str) -> Result<MapSpec, MapError> {
    Ok(match canonical(name)? {
        "R" => r_map(),
        "g" => g_map(),
        "f" => f_map(),
        "m" => m_map(),
        _ => newton(NEWTON_B),
    })
}

/// Shared, lazily built catalog entries.
pub fn cached(name: &str) -> Result<&'static MapSpec, MapError> {
    static CACHE: std::sync::OnceLock<Vec<MapSpec>> = std::sync::OnceLock::new();
    let all = CACHE.get_or_init(all);
    let want = canonical(name)?;
    Ok(all.iter().find(|m| m.name == want).expect("catalog entry"))
}

pub fn all() -> Vec<MapSpec> {
    NAMES.iter().map(|n| by_name(n).unwrap()).collect()
}

/// The Migdal–Kadanoff renormalization map of the diamond hierarchical lattice.
pub fn r_map() -> MapSpec {
    use ChartId::{PhysicalZt as Ph, PqAtInfinity as Pq};
    // physical (z, t)
    let phys = rp(
        p(&[(4, 0, 1.0), (2, 2, 1.0)]),
        p(&[(0, 0, 1.0), (2, 2, 1.0)]),
        p(&[(4, 2, 1.0), (2, 2, 2.0), (0, 2, 1.0)]),
        p(&[(2, 0, 1.0), (0, 2, 1.0), (4, 2, 1.0), (2, 4, 1.0)]),
    );
    // (p, q): p' = p²(p+2q)²/(1+q²)², q' = q²(1+(p+q)²)²/(1+q²)²
    let (x, y) = (Poly2::x(), Poly2::y());
    let s = &x + &y;
    let inner = &one() + &(&s * &s);
    let den = p(&[(0, 0, 1.0), (0, 2, 2.0), (0, 4, 1.0)]);
    let pq = rp(p(&[(4, 0, 1.0), (3, 1, 4.0), (2, 2, 4.0)]), den.clone(), &(&y * &y) * &(&inner * &inner), den);
    let atlas = Atlas {
        transitions: vec![
            tr(Ph, Pq, rp(p(&[(0, 0, 1.0), (0, 1, -1.0)]), p(&[(1, 0, 1.0)]), p(&[(0, 1, 1.0)]), p(&[(1, 0, 1.0)]))),
            tr(Pq, Ph, rp(one(), p(&[(1, 0, 1.0), (0, 1, 1.0)]), p(&[(0, 1, 1.0)]), p(&[(1, 0, 1.0), (0, 1, 1.0)]))),
        ],
    };
    let i = Complex64::new(0.0, 1.0);
    let mut special_points = vec![
        special("b0", SpecialKind::Indeterminacy, Ph, re(0.0), re(0.0)),
        special("p2", SpecialKind::Fixed, Ph, re(0.0), re(1.0)),
        special("p-infinity", SpecialKind::Fixed, Pq, re(0.0), re(0.0)),
    ];
    for (k, (z, t)) in [(i, 1.0), (i, -1.0), (-i, 1.0), (-i, -1.0)].into_iter().enumerate() {
        special_points.push(special(&format!("indeterminacy-{k}"), SpecialKind::Indeterminacy, Ph, z, re(t)));
    }
    MapSpec {
        name: "R".into(),
        a: 2,
        b: 4,
        topological_degree: Some(8),
        invariant_circle: "pq-at-infinity: |p| = 1, q = 0 (physical: |z| = 1, t = 0)".into(),
        charts: vec![
            ChartFormula { chart: Pq, role: ChartRole::Zero, formula: pq },
            ChartFormula { chart: Ph, role: ChartRole::Infinity, formula: phys },
        ],
        atlas,
        special_points,
        attractors: vec![basin(AttractorKind::PInfinity, Pq, 0.0, 0.0), basin(AttractorKind::Other, Ph, 0.0, 1.0)],
        solve_chart: Some(Ph),
    }
}

/// g(x, y) = (x² + y(1 + xy), y³(1 + xy)); a = 3, b = 2.
pub fn g_map() -> MapSpec {
    use ChartId::{AffineZero as A, BlowupZetaTau as Bl};
    let aff =
        RationalPair::polynomial(p(&[(2, 0, 1.0), (0, 1, 1.0), (1, 2, 1.0)]), p(&[(0, 3, 1.0), (1, 4, 1.0)])).unwrap();
    // E = 1 + τζ³ + τ²ζ³;  ζ' = ζ²/E,  τ' = τ³ζ(1+τ)E
    let e = p(&[(0, 0, 1.0), (3, 1, 1.0), (3, 2, 1.0)]);
    let t3z = &p(&[(1, 3, 1.0)]) * &p(&[(0, 0, 1.0), (0, 1, 1.0)]);
    let blow = rp(p(&[(2, 0, 1.0)]), e.clone(), &t3z * &e, one());
    let atlas = Atlas {
        transitions: vec![
            tr(A, Bl, rp(one(), p(&[(1, 0, 1.0)]), p(&[(1, 1, 1.0)]), one())),
            tr(Bl, A, rp(one(), p(&[(1, 0, 1.0)]), p(&[(1, 1, 1.0)]), one())),
        ],
    };
    MapSpec {
        name: "g".into(),
        a: 3,
        b: 2,
        topological_degree: None,
        invariant_circle: "affine-zero: |x| = 1, y = 0".into(),
        charts: vec![
            ChartFormula { chart: A, role: ChartRole::Zero, formula: aff },
            ChartFormula { chart: Bl, role: ChartRole::Infinity, formula: blow },
        ],
        atlas,
        special_points: vec![
            special("p1", SpecialKind::Fixed, A, re(0.0), re(0.0)),
            special("p-infinity", SpecialKind::Fixed, Bl, re(0.0), re(0.0)),
        ],
        attractors: vec![basin(AttractorKind::PInfinity, Bl, 0.0, 0.0), basin(AttractorKind::Other, A, 0.0, 0.0)],
        solve_chart: None,
    }
}

/// f(z, w) = (z³ + 2wz², w²); a = 2 < b = 3.
pub fn f_map() -> MapSpec {
    use ChartId::{AffineInfinity as I, AffineZero as A};
    let aff = RationalPair::polynomial(p(&[(3, 0, 1.0), (2, 1, 2.0)]), p(&[(0, 2, 1.0)])).unwrap();
    // (ζ, σ) = (1/z, w/z)
    let den = p(&[(0, 0, 1.0), (0, 1, 2.0)]);
    let inf = rp(p(&[(3, 0, 1.0)]), den.clone(), p(&[(1, 2, 1.0)]), den);
    let atlas = Atlas {
        transitions: vec![
            tr(A, I, rp(one(), p(&[(1, 0, 1.0)]), p(&[(0, 1, 1.0)]), p(&[(1, 0, 1.0)]))),
            tr(I, A, rp(one(), p(&[(1, 0, 1.0)]), p(&[(0, 1, 1.0)]), p(&[(1, 0, 1.0)]))),
        ],
    };
    MapSpec {
        name: "f".into(),
        a: 2,
        b: 3,
        topological_degree: Some(6),
        invariant_circle: "affine-zero: |z| = 1, w = 0".into(),
        charts: vec![
            ChartFormula { chart: A, role: ChartRole::Zero, formula: aff },
            ChartFormula { chart: I, role: ChartRole::Infinity, formula: inf },
        ],
        atlas,
        special_points: vec![
            special("p1", SpecialKind::Fixed, A, re(0.0), re(0.0)),
            special("p-infinity", SpecialKind::Fixed, I, re(0.0), re(0.0)),
        ],
        attractors: vec![basin(AttractorKind::PInfinity, I, 0.0, 0.0), basin(AttractorKind::Other, A, 0.0, 0.0)],
        solve_chart: None,
    }
}

/// Comparison skew map m(z, w) = (z² + w²z, w²) with a = b = 2.
pub fn m_map() -> MapSpec {
    use ChartId::{AffineInfinity as I, AffineZero as A};
    let aff = RationalPair::polynomial(p(&[(2, 0, 1.0), (1, 2, 1.0)]), p(&[(0, 2, 1.0)])).unwrap();
    // bundle chart (ζ, w) = (1/z, w): ζ' = ζ²/(1 + w²ζ)
    let inf = rp(p(&[(2, 0, 1.0)]), p(&[(0, 0, 1.0), (1, 2, 1.0)]), p(&[(0, 2, 1.0)]), one());
    let flip = || rp(one(), p(&[(1, 0, 1.0)]), p(&[(0, 1, 1.0)]), one());
    MapSpec {
        name: "m".into(),
        a: 2,
        b: 2,
        topological_degree: Some(4),
        invariant_circle: "affine-zero: |z| = 1, w = 0".into(),
        charts: vec![
            ChartFormula { chart: A, role: ChartRole::Zero, formula: aff },
            ChartFormula { chart: I, role: ChartRole::Infinity, formula: inf },
        ],
        atlas: Atlas { transitions: vec![tr(A, I, flip()), tr(I, A, flip())] },
        special_points: vec![
            special("p1", SpecialKind::Fixed, A, re(0.0), re(0.0)),
            special("p-infinity", SpecialKind::Fixed, I, re(0.0), re(0.0)),
        ],
        attractors: vec![basin(AttractorKind::PInfinity, I, 0.0, 0.0), basin(AttractorKind::Other, A, 0.0, 0.0)],
        solve_chart: None,
    }
}

/// Newton map for the common roots of x(x - 1) and y² + Bxy - y.
pub fn newton(b: f64) -> MapSpec {
    use ChartId::{AffineZero as A, Cayley as C, CayleyInfinity as CI};
    let aff = rp(
        p(&[(2, 0, 1.0)]),
        p(&[(1, 0, 2.0), (0, 0, -1.0)]),
        p(&[(2, 1, b), (1, 2, 2.0), (1, 1, -b), (0, 2, -1.0)]),
        p(&[(2, 0, 2.0 * b), (1, 1, 4.0), (1, 0, -2.0 - b), (0, 1, -2.0), (0, 0, 1.0)]),
    );
    let (z, w) = (Poly2::x(), Poly2::y());
    let bs = Complex64::new(b, 0.0);
    let one_ = one();
    let w2m1 = p(&[(0, 1, 2.0), (0, 0, -1.0)]);
    let bw_wm1 = (&w * &(&w - &one_)).scale(&bs);
    // Cayley chart: A = z[Bw(w−1)(z−1) + (2w−1)z],  D = (z−1)(2w−1)(Bw(z−1) + z + 1)
    let zm1 = &z - &one_;
    let big_a = &z * &(&(&bw_wm1 * &zm1) + &(&w2m1 * &z));
    let big_d = &(&zm1 * &w2m1) * &(&(&w.scale(&bs) * &zm1) + &(&z + &one_));
    let w_map = (p(&[(0, 2, 1.0)]), w2m1.clone());
    let cay = rp(big_a.clone(), &big_a - &big_d, w_map.0.clone(), w_map.1.clone());
    // Cayley-infinity chart, ζ = 1/z
    let om = &one_ - &z; // 1 − ζ
    let ai = &(&bw_wm1 * &om) + &w2m1;
    let di = &(&om * &w2m1) * &(&(&w.scale(&bs) * &om) + &(&one_ + &z));
    let cinf = rp(&ai - &di, ai, w_map.0, w_map.1);
    let x1 = p(&[(1, 0, 1.0)]);
    let y1 = p(&[(0, 1, 1.0)]);
    let atlas = Atlas {
        transitions: vec![
            // (x, y) -> (y/(y-1), x)
            tr(A, C, rp(y1.clone(), p(&[(0, 1, 1.0), (0, 0, -1.0)]), x1.clone(), one())),
            // (z, w) -> (w, z/(z-1))
            tr(C, A, rp(y1.clone(), one(), x1.clone(), p(&[(1, 0, 1.0), (0, 0, -1.0)]))),
            tr(C, CI, rp(one(), x1.clone(), y1.clone(), one())),
            tr(CI, C, rp(one(), x1.clone(), y1.clone(), one())),
            // (x, y) -> ((y-1)/y, x)
            tr(A, CI, rp(p(&[(0, 1, 1.0), (0, 0, -1.0)]), y1.clone(), x1.clone(), one())),
            // (ζ, w) -> (w, 1/(1-ζ))
            tr(CI, A, rp(y1, one(), one(), p(&[(0, 0, 1.0), (1, 0, -1.0)]))),
        ],
    };
    MapSpec {
        name: "N".into(),
        a: 2,
        b: 2,
        topological_degree: None,
        invariant_circle: "cayley: |z| = 1, w = 0 (affine: Re(y) = 1/2, x = 0)".into(),
        charts: vec![
            ChartFormula { chart: C, role: ChartRole::Zero, formula: cay },
            ChartFormula { chart: CI, role: ChartRole::Infinity, formula: cinf },
            ChartFormula { chart: A, role: ChartRole::Aux, formula: aff },
        ],
        atlas,
        special_points: vec![
            special("root-y0", SpecialKind::Fixed, C, re(0.0), re(0.0)),
            special("root-y1", SpecialKind::Fixed, CI, re(0.0), re(0.0)),
            special("indeterminacy-half", SpecialKind::Indeterminacy, A, re(0.5), re(0.0)),
            special("indeterminacy-inv-b", SpecialKind::Indeterminacy, A, re(1.0 / b), re(0.0)),
        ],
        attractors: vec![basin(AttractorKind::PInfinity, CI, 0.0, 0.0), basin(AttractorKind::Other, C, 0.0, 0.0)],
        solve_chart: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_passes_load_checks() {
        for m in all() {
            m.validate().unwrap_or_else(|e| panic!("{}: {e}", m.name));
        }
    }

    #[test]
    fn skew_flags() {
        assert!(f_map().is_skew());
        assert!(m_map().is_skew());
        assert!(!g_map().is_skew());
        assert!(!r_map().is_skew());
        assert!(!newton(NEWTON_B).is_skew());
    }

    #[test]
    fn json_round_trip() {
        for m in all() {
            let back = MapSpec::from_json(&m.to_json()).unwrap();
            assert_eq!(back.charts.len(), m.charts.len());
            assert_eq!(back.charts[0].formula, m.charts[0].formula);
        }
    }

    #[test]
    fn wrong_degree_fails_normal_form_check() {
        let mut m = f_map();
        m.b = 2;
        assert!(m.validate().is_err());
        let mut m = g_map();
        m.a = 4;
        assert!(m.validate().is_err());
    }
}
