use circlelab_core::Complex64;
use nalgebra::DMatrix;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Determinant by LU with partial pivoting (destroys `a`).
pub fn det(a: &mut [Vec<Complex64>]) -> Complex64 {
    let n = a.len();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n).max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm())).unwrap();
        if a[piv][k].norm() == 0.0 {
            return czero();
        }
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        let p = a[k][k];
        d *= p;
        for i in k + 1..n {
            let f = a[i][k] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for j in k..n {
                let v = a[k][j];
                a[i][j] -= f * v;
            }
        }
    }
    d
}

fn horner(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = czero();
    let mut dp = czero();
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// All roots of sum c[k] x^k: companion-matrix eigenvalues, then a few
/// Newton steps on the polynomial itself.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = c.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    roots.extend(std::iter::repeat(czero()).take(lead_zeros));
    let c = &c[lead_zeros..];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return roots;
    }
    let lead = c[n];
    if n == 1 {
        roots.push(-c[0] / lead);
        return roots;
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let eig: Vec<Complex64> = match m.clone().try_schur(f64::EPSILON, 300).and_then(|s| s.eigenvalues()) {
        Some(v) => v.iter().cloned().collect(),
        None => aberth(c),
    };
    for mut z in eig {
        for _ in 0..3 {
            let (p, dp) = horner(c, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + z.norm()) {
                break;
            }
            z -= step;
            if step.norm() <= 1e-16 * z.norm() {
                break;
            }
        }
        roots.push(z);
    }
    roots
}

/// Aberth–Ehrlich simultaneous iteration; fallback when Schur fails.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let r = c.iter().map(|x| x.norm()).fold(0.0, f64::max) / c[n].norm();
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r.max(1.0), 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            let ratio = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Coefficients of the polynomial of degree <= n - 1 taking `vals[k]` at
/// `r * exp(2πik/n)` (inverse DFT).
pub fn interpolate_circle(vals: &[Complex64], r: f64) -> Vec<Complex64> {
    let n = vals.len();
    let mut out = Vec::with_capacity(n);
    let mut rj = 1.0;
    for j in 0..n {
        let mut s = czero();
        for (k, v) in vals.iter().enumerate() {
            let ang = -std::f64::consts::TAU * ((j * k) % n) as f64 / n as f64;
            s += v * Complex64::from_polar(1.0, ang);
        }
        out.push(s / (n as f64 * rj));
        rj *= r;
    }
    out
}

/// Solve a 2x2 complex system; None when nearly singular.
pub fn solve2(j: [[Complex64; 2]; 2], b: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let d = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let scale = j.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    if !(d.norm() > 1e-13 * scale * scale) {
        return None;
    }
    Some([(b[0] * j[1][1] - b[1] * j[0][1]) / d, (j[0][0] * b[1] - j[1][0] * b[0]) / d])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_known_polynomial() {
        // (x - 1)(x + 2)(x - i) x
        let r = [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)];
        let mut p = vec![c(1.0, 0.0)];
        for z in r {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * z;
            }
            p = q;
        }
        let found = poly_roots(&p);
        assert_eq!(found.len(), 4);
        for z in r {
            assert!(found.iter().any(|w| (w - z).norm() < 1e-12), "{z}");
        }
    }

    #[test]
    fn determinant_and_interpolation() {
        let mut a = vec![vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]];
        // 6 - (1+i)(-i) = 6 + i - 1
        assert!((det(&mut a) - c(5.0, 1.0)).norm() < 1e-14);
        let coeffs = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0)];
        let r = 1.7;
        let vals: Vec<Complex64> = (0..5)
            .map(|k| {
                let x = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / 5.0);
                coeffs[0] + coeffs[1] * x + coeffs[2] * x * x
            })
            .collect();
        let back = interpolate_circle(&vals, r);
        for k in 0..3 {
            assert!((back[k] - coeffs[k]).norm() < 1e-13);
        }
        assert!(back[3].norm() < 1e-13 && back[4].norm() < 1e-13);
    }
}
