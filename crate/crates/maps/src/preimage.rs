//! Preimages by resultant elimination: the second unknown is eliminated with
//! a Sylvester determinant sampled on a circle and interpolated, the
//! univariate roots come from companion eigenvalues, and each root is
//! back-substituted, Newton-polished on the full system and forward-checked.

use crate::error::MapError;
use crate::linalg::{det, interpolate_circle, poly_roots, solve2};
use crate::spec::MapSpec;
use circlelab_core::{to_chart, ChartPoint, Complex64, Poly1, Poly2, RationalPair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreimageOptions {
    /// Forward residual, relative to max(1, |target coordinate|).
    pub verify_tol: f64,
    /// Candidates closer than this are the same preimage.
    pub merge_tol: f64,
    /// Distinct preimages closer than this signal a critical target.
    pub cluster_tol: f64,
    pub polish_steps: usize,
}

impl Default for PreimageOptions {
    fn default() -> Self {
        PreimageOptions { verify_tol: 1e-9, merge_tol: 1e-8, cluster_tol: 1e-6, polish_steps: 8 }
    }
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn scaled_dist(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    let s = 1.0f64.max(a.0.norm()).max(a.1.norm());
    (a.0 - b.0).norm().max((a.1 - b.1).norm()) / s
}

/// Roots in x of Res_y(p1, p2).
fn eliminate(p1: &Poly2, p2: &Poly2) -> Result<Vec<Complex64>, MapError> {
    let a = p1.by_y();
    let b = p2.by_y();
    let (m, n) = (a.len() - 1, b.len() - 1);
    let coeffs_of = |p: &Poly1<Complex64>| p.coeffs().to_vec();
    if m == 0 {
        return Ok(poly_roots(&coeffs_of(&a[0])));
    }
    if n == 0 {
        return Ok(poly_roots(&coeffs_of(&b[0])));
    }
    let bound = (n as u32 * p1.deg_x() + m as u32 * p2.deg_x()).min(p1.degree() * p2.degree()) as usize;
    let size = m + n;
    let res_at = |x: Complex64| -> Complex64 {
        let av: Vec<Complex64> = a.iter().map(|p| p.eval(x)).collect();
        let bv: Vec<Complex64> = b.iter().map(|p| p.eval(x)).collect();
        let mut s = vec![vec![czero(); size]; size];
        for i in 0..n {
            for j in 0..=m {
                s[i][i + j] = av[m - j];
            }
        }
        for i in 0..m {
            for j in 0..=n {
                s[n + i][i + j] = bv[n - j];
            }
        }
        det(&mut s)
    };
    let roots_at_radius = |r: f64| -> Result<Vec<Complex64>, MapError> {
        let npts = bound + 1;
        let vals: Vec<Complex64> = (0..npts)
            .map(|k| res_at(Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / npts as f64)))
            .collect();
        // coefficients in s = x / r
        let mut sc = interpolate_circle(&vals, r);
        let mut rj = 1.0;
        for c in sc.iter_mut() {
            *c *= rj;
            rj *= r;
        }
        let big = sc.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(big > 0.0) || !big.is_finite() {
            return Err(MapError::RootFinding("resultant vanishes identically".into()));
        }
        for c in sc.iter_mut() {
            if c.norm() < 1e-13 * big {
                *c = czero();
            }
        }
        Ok(poly_roots(&sc).into_iter().map(|s| s * r).collect())
    };
    let roots = roots_at_radius(1.0)?;
    let mut mags: Vec<f64> = roots.iter().map(|z| z.norm()).filter(|&x| x > 0.0 && x.is_finite()).collect();
    if mags.is_empty() {
        return Ok(roots);
    }
    mags.sort_by(f64::total_cmp);
    let med = mags[mags.len() / 2];
    if !(0.25..=4.0).contains(&med) {
        return roots_at_radius(med);
    }
    Ok(roots)
}

fn residual(f: &RationalPair, x: (Complex64, Complex64), y: (Complex64, Complex64)) -> Option<f64> {
    let [n1, d1, n2, d2] = f.parts(x.0, x.1);
    if d1.norm() < 1e-300 || d2.norm() < 1e-300 {
        return None;
    }
    let r1 = (n1 / d1 - y.0).norm() / 1.0f64.max(y.0.norm());
    let r2 = (n2 / d2 - y.1).norm() / 1.0f64.max(y.1.norm());
    let r = r1.max(r2);
    r.is_finite().then_some(r)
}

fn polish(
    f: &RationalPair,
    mut x: (Complex64, Complex64),
    y: (Complex64, Complex64),
    steps: usize,
) -> (Complex64, Complex64) {
    for _ in 0..steps {
        let (g1, g2) = f.eval(x.0, x.1);
        let g = [g1 - y.0, g2 - y.1];
        if !(g[0].is_finite() && g[1].is_finite()) {
            break;
        }
        let Some(d) = solve2(f.jacobian(x.0, x.1), g) else { break };
        let nx = (x.0 - d[0], x.1 - d[1]);
        if !(nx.0.is_finite() && nx.1.is_finite()) {
            break;
        }
        // never accept a step that makes things worse
        match (residual(f, nx, y), residual(f, x, y)) {
            (Some(a), Some(b)) if a <= b => x = nx,
            (Some(_), None) => x = nx,
            _ => break,
        }
        if d[0].norm().max(d[1].norm()) <= 1e-16 * (1.0 + x.0.norm().max(x.1.norm())) {
            break;
        }
    }
    x
}

/// Candidate common roots of two polynomials (unpolished).
fn solve_polys(p1: &Poly2, p2: &Poly2) -> Result<Vec<(Complex64, Complex64)>, MapError> {
    let cost_y = p1.deg_y() + p2.deg_y();
    let cost_x = p1.deg_x() + p2.deg_x();
    let swapped = cost_x < cost_y;
    let (q1, q2) = if swapped { (p1.swap(), p2.swap()) } else { (p1.clone(), p2.clone()) };
    let us = eliminate(&q1, &q2)?;
    let (a, b) = (q1.by_y(), q2.by_y());
    let mut cands = Vec::new();
    for u in us {
        if !u.is_finite() {
            continue;
        }
        let c1: Vec<Complex64> = a.iter().map(|p| p.eval(u)).collect();
        let c2: Vec<Complex64> = b.iter().map(|p| p.eval(u)).collect();
        let lead = |c: &[Complex64]| c.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let use_first = c1.len() > 1 && c1[1..].iter().any(|x| x.norm() > 1e-10 * lead(&c1));
        let vs = if use_first { poly_roots(&c1) } else { poly_roots(&c2) };
        for v in vs {
            if v.is_finite() {
                cands.push(if swapped { (v, u) } else { (u, v) });
            }
        }
    }
    Ok(cands)
}

/// Verified, merged (at merge_tol) solutions of f(x) = y in one chart.
pub fn solve_formula(
    f: &RationalPair,
    y: (Complex64, Complex64),
    opts: &PreimageOptions,
) -> Result<Vec<(Complex64, Complex64)>, MapError> {
    let y0 = Poly2::constant(y.0);
    let y1 = Poly2::constant(y.1);
    let p1 = f.num1() - &(f.den1() * &y0);
    let p2 = f.num2() - &(f.den2() * &y1);
    // even symmetry in a variable: solve in its square, then take both roots
    let even = |k: usize| [&p1, &p2].iter().all(|p| p.terms().iter().all(|t| [t.0, t.1][k] % 2 == 0));
    let (ex, ey) = (even(0), even(1));
    let halve = |p: &Poly2| {
        Poly2::from_terms(
            p.terms().iter().map(|&(i, j, c)| (if ex { i / 2 } else { i }, if ey { j / 2 } else { j }, c)),
        )
    };
    let reduced = solve_polys(&halve(&p1), &halve(&p2))?;
    let roots = |u: Complex64, on: bool| if on { vec![u.sqrt(), -u.sqrt()] } else { vec![u] };
    let mut cands = Vec::new();
    for (u, v) in reduced {
        for a in roots(u, ex) {
            for b in roots(v, ey) {
                cands.push((a, b));
            }
        }
    }
    let mut out: Vec<(Complex64, Complex64)> = Vec::new();
    for c in cands {
        let x = polish(f, c, y, opts.polish_steps);
        match residual(f, x, y) {
            Some(r) if r <= opts.verify_tol => {}
            _ => continue,
        }
        if !out.iter().any(|o| scaled_dist(*o, x) < opts.merge_tol) {
            out.push(x);
        }
    }
    Ok(out)
}

fn solve_points(map: &MapSpec, y: &ChartPoint, opts: &PreimageOptions) -> Result<Vec<ChartPoint>, MapError> {
    let chart = map.solve_chart.unwrap_or(y.chart);
    let ys = to_chart(y, chart, &map.atlas)?;
    let f = &map.formula(chart)?.formula;
    let sols = solve_formula(f, (ys.c1, ys.c2), opts)?;
    Ok(sols
        .into_iter()
        .map(|(a, b)| {
            let p = ChartPoint::new(chart, a, b);
            // report in the target's chart where that chart can hold the point
            to_chart(&p, y.chart, &map.atlas).unwrap_or(p)
        })
        .collect())
}

/// All preimages of a generic target. Points are returned in y's chart when
/// representable there, otherwise in the map's solve chart.
pub fn preimages(map: &MapSpec, y: &ChartPoint) -> Result<Vec<ChartPoint>, MapError> {
    preimages_with(map, y, &PreimageOptions::default())
}

pub fn preimages_with(map: &MapSpec, y: &ChartPoint, opts: &PreimageOptions) -> Result<Vec<ChartPoint>, MapError> {
    let pts = solve_points(map, y, opts)?;
    let mut sep = f64::INFINITY;
    for i in 0..pts.len() {
        for j in 0..i {
            if pts[i].chart == pts[j].chart {
                sep = sep.min(scaled_dist((pts[i].c1, pts[i].c2), (pts[j].c1, pts[j].c2)));
            }
        }
    }
    if sep < opts.cluster_tol {
        return Err(MapError::DegenerateTarget { sep });
    }
    Ok(pts)
}

/// Lenient variant for critical targets: preimages closer than cluster_tol
/// are averaged and reported with the number of merged points.
pub fn preimage_clusters(map: &MapSpec, y: &ChartPoint) -> Result<Vec<(ChartPoint, usize)>, MapError> {
    let opts = PreimageOptions::default();
    let pts = solve_points(map, y, &opts)?;
    let mut clusters: Vec<(ChartPoint, usize)> = Vec::new();
    for p in pts {
        let hit = clusters
            .iter_mut()
            .find(|(c, _)| c.chart == p.chart && scaled_dist((c.c1, c.c2), (p.c1, p.c2)) < opts.cluster_tol);
        match hit {
            Some((c, k)) => {
                let w = *k as f64;
                c.c1 = (c.c1 * w + p.c1) / (w + 1.0);
                c.c2 = (c.c2 * w + p.c2) / (w + 1.0);
                *k += 1;
            }
            None => clusters.push((p, 1)),
        }
    }
    Ok(clusters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::*;
    use crate::eval::eval_in_chart;
    use circlelab_core::ChartId;

    #[test]
    fn skew_f_has_six_preimages() {
        let f = f_map();
        let y = ChartPoint::real(ChartId::AffineZero, 1.0, 0.25);
        let pre = preimages(&f, &y).unwrap();
        assert_eq!(pre.len(), 6);
        for x in &pre {
            assert!((x.c2.norm() - 0.5).abs() < 1e-12);
            let w = x.c2;
            // cubic oracle: z^3 + 2 w z^2 - 1 = 0
            assert!((x.c1.powu(3) + 2.0 * w * x.c1 * x.c1 - 1.0).norm() < 1e-10);
        }
        let plus = pre.iter().filter(|x| (x.c2 - 0.5).norm() < 1e-12).count();
        assert_eq!(plus, 3);
    }

    #[test]
    fn r_preimages_contain_two() {
        let r = r_map();
        let y = ChartPoint::real(ChartId::PhysicalZt, 16.0, 0.0);
        // (16, 0) lies on the critical line t = 0: use the clustered variant
        let cl = preimage_clusters(&r, &y).unwrap();
        let two = cl.iter().any(|(x, _)| {
            let x = to_chart(x, ChartId::PhysicalZt, &r.atlas).unwrap();
            (x.c1 - 2.0).norm() < 1e-6 && x.c2.norm() < 1e-6
        });
        assert!(two, "{cl:?}");
    }

    #[test]
    fn r_generic_target_has_eight() {
        let r = r_map();
        let y = ChartPoint::new(ChartId::PhysicalZt, Complex64::new(0.7, 0.4), Complex64::new(0.3, -0.55));
        let pre = preimages(&r, &y).unwrap();
        assert_eq!(pre.len(), 8);
        for x in &pre {
            let fx = eval_in_chart(&r, x).unwrap();
            assert!(fx.dist(&y) < 1e-9);
        }
    }
}
