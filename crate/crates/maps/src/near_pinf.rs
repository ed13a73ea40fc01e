//! Preimages of ℛ near the fixed point p∞, in the pq chart and in any
//! scalar type. With the extended-range type this reaches targets whose
//! coordinates are far below f64 range, where the general solver cannot go.
//!
//! Seeds come from the leading-order system q² = Q, p(p + 2q) = ±√P(1 + q²),
//! and Newton on the full polynomial system
//!   F1 = p²(p+2q)² − P(1+q²)²,  F2 = q²(1+(p+q)²)² − Q(1+q²)²
//! finishes the job.

use circlelab_core::{Complex64, Scalar};

fn k<S: Scalar>(like: &S, x: f64) -> S {
    like.lift(Complex64::new(x, 0.0))
}

fn system<S: Scalar>(p: &S, q: &S, tp: &S, tq: &S) -> ([S; 2], [[S; 2]; 2], [S; 2]) {
    let one = k(p, 1.0);
    let two = k(p, 2.0);
    let four = k(p, 4.0);
    let s = p.clone() + two.clone() * q.clone(); // p + 2q
    let u = p.clone() + q.clone(); // p + q
    let e = one.clone() + q.clone() * q.clone(); // 1 + q²
    let g = one + u.clone() * u.clone(); // 1 + (p+q)²
    let lhs1 = p.clone() * p.clone() * s.clone() * s.clone();
    let rhs1 = tp.clone() * e.clone() * e.clone();
    let lhs2 = q.clone() * q.clone() * g.clone() * g.clone();
    let rhs2 = tq.clone() * e.clone() * e.clone();
    let f1 = lhs1.clone() - rhs1.clone();
    let f2 = lhs2.clone() - rhs2.clone();
    let j11 = two.clone() * p.clone() * s.clone() * (two.clone() * u.clone());
    let j12 = four.clone() * p.clone() * p.clone() * s - four.clone() * tp.clone() * q.clone() * e.clone();
    let j21 = four.clone() * q.clone() * q.clone() * u.clone() * g.clone();
    let j22 = two * q.clone() * g.clone() * g.clone() + four.clone() * q.clone() * q.clone() * u * g
        - four * tq.clone() * q.clone() * e;
    // scales for relative residuals
    let s1 = lhs1.abs_ln_max(&rhs1);
    let s2 = lhs2.abs_ln_max(&rhs2);
    ([f1, f2], [[j11, j12], [j21, j22]], [s1, s2])
}

trait LnMax: Scalar {
    fn abs_ln_max(&self, o: &Self) -> Self {
        // returns a scalar carrying max(ln|self|, ln|o|) in its real part
        let v = self.ln_abs().max(o.ln_abs());
        self.lift(Complex64::new(v, 0.0))
    }
}
impl<S: Scalar> LnMax for S {}

/// Relative residual ln-scale: ln|F| − ln(max term).
fn rel_residual<S: Scalar>(p: &S, q: &S, tp: &S, tq: &S) -> f64 {
    let (f, _, s) = system(p, q, tp, tq);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..2 {
        let lf = f[i].ln_abs();
        let ls = s[i].to_c64().re;
        if lf == f64::NEG_INFINITY {
            continue;
        }
        worst = worst.max(lf - ls);
    }
    worst
}

fn newton<S: Scalar>(mut p: S, mut q: S, tp: &S, tq: &S, ln_tol: f64) -> (S, S) {
    for _ in 0..60 {
        if rel_residual(&p, &q, tp, tq) <= ln_tol {
            break;
        }
        let (f, j, _) = system(&p, &q, tp, tq);
        let det = j[0][0].clone() * j[1][1].clone() - j[0][1].clone() * j[1][0].clone();
        if det.is_zero() {
            break;
        }
        let dp = (f[0].clone() * j[1][1].clone() - f[1].clone() * j[0][1].clone()) / det.clone();
        let dq = (j[0][0].clone() * f[1].clone() - j[1][0].clone() * f[0].clone()) / det;
        let np = p.clone() - dp;
        let nq = q.clone() - dq;
        if rel_residual(&np, &nq, tp, tq) > rel_residual(&p, &q, tp, tq) {
            break;
        }
        p = np;
        q = nq;
    }
    (p, q)
}

/// Up to eight preimages (p, q) of the target (P, Q), each with its
/// relative residual on the natural-log scale (below about -27 means 1e-12).
pub fn r_preimages_pq<S: Scalar>(tp: &S, tq: &S) -> Vec<(S, S, f64)> {
    let one = k(tp, 1.0);
    let mut out: Vec<(S, S, f64)> = Vec::new();
    let root_q = tq.sqrt();
    let root_p = tp.sqrt();
    for q0 in [root_q.clone(), -root_q] {
        let e = one.clone() + q0.clone() * q0.clone();
        for sp in [root_p.clone(), -root_p.clone()] {
            let s = sp * e.clone();
            // p² + 2 q p − s = 0, stable form of the quadratic formula
            let r = (q0.clone() * q0.clone() + s.clone()).sqrt();
            let a = -q0.clone() - r.clone();
            let b = -q0.clone() + r;
            let big = if a.ln_abs() >= b.ln_abs() { a } else { b };
            let small = if big.is_zero() { big.clone() } else { -s / big.clone() };
            for p0 in [big, small] {
                let (p, q) = newton(p0, q0.clone(), tp, tq, -27.0);
                let res = rel_residual(&p, &q, tp, tq);
                let dup = out.iter().any(|(a, b, _)| same(a, &p) && same(b, &q));
                if !dup {
                    out.push((p, q, res));
                }
            }
        }
    }
    out
}

fn same<S: Scalar>(a: &S, b: &S) -> bool {
    let d = (a.clone() - b.clone()).ln_abs();
    let s = a.ln_abs().max(b.ln_abs());
    d == f64::NEG_INFINITY || d - s < -23.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::preimage::preimages;
    use circlelab_core::precision::big_c;
    use circlelab_core::{BigC, ChartId, ChartPoint};

    #[test]
    fn agrees_with_general_solver() {
        let r = catalog::cached("R").unwrap();
        let (tp, tq) = (Complex64::new(0.004, 0.001), Complex64::new(-0.002, 0.003));
        let mine = r_preimages_pq(&tp, &tq);
        let good: Vec<_> = mine.iter().filter(|m| m.2 < -25.0).collect();
        let gen = preimages(r, &ChartPoint::new(ChartId::PqAtInfinity, tp, tq)).unwrap();
        assert_eq!(good.len(), 8);
        assert_eq!(gen.len(), 8);
        for (p, q, _) in good {
            assert!(gen.iter().any(|g| (g.c1 - p).norm() < 1e-9 && (g.c2 - q).norm() < 1e-9));
        }
    }

    #[test]
    fn extended_range_targets() {
        let bits = 128;
        let tq = big_c(Complex64::new(0.1, 0.0), bits).powu(1000);
        let tp = big_c(Complex64::new(0.0, 0.0), bits);
        let pre: Vec<(BigC, BigC, f64)> = r_preimages_pq(&tp, &tq);
        // on L1 (p = 0): q = ±√Q exactly, and the D branch p = −2q
        assert!(pre.iter().any(|(p, q, _)| p.is_zero() && (q.ln_abs() - 500.0 * 0.1f64.ln()).abs() < 1e-9));
        assert!(pre.iter().all(|m| m.2 < -25.0));
    }
}
