use crate::catalog;
use crate::error::MapError;
use circlelab_core::{to_chart, ChartId, ChartPoint, Complex64};

type H = [Complex64; 3];

/// Ψ[Z:T:Y] = [Y² : ZT : Z²]
fn psi(x: &H) -> H {
    [x[2] * x[2], x[0] * x[1], x[0] * x[0]]
}

/// R[U:V:W] = [(U²+V²)² : V²(U+W)² : (W²+V²)²]
fn r_small(x: &H) -> H {
    let (u, v, w) = (x[0], x[1], x[2]);
    let a = u * u + v * v;
    let c = w * w + v * v;
    let s = u + w;
    [a * a, v * v * s * s, c * c]
}

/// ℛ[Z:T:Y] = [Z²(Z²+T²)² : T²(Z²+Y²)² : (Z²+T²)(T²Z²+Y⁴)]
fn r_big(x: &H) -> H {
    let (z, t, y) = (x[0], x[1], x[2]);
    let (z2, t2, y2) = (z * z, t * t, y * y);
    let a = z2 + t2;
    let b = z2 + y2;
    [z2 * a * a, t2 * b * b, a * (t2 * z2 + y2 * y2)]
}

fn norm(x: &H) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Fubini–Study chordal distance |u ∧ v| / (|u| |v|).
fn proj_dist(u: &H, v: &H) -> f64 {
    let (nu, nv) = (norm(u), norm(v));
    let a: Vec<Complex64> = u.iter().map(|c| c / nu).collect();
    let b: Vec<Complex64> = v.iter().map(|c| c / nv).collect();
    let mut s = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            s += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    s.sqrt()
}

/// Projective distance between R(Ψ(x)) and Ψ(ℛ(x)).
pub fn semiconjugacy_residual(x: &ChartPoint) -> Result<f64, MapError> {
    let r = catalog::cached("R")?;
    let ph = to_chart(x, ChartId::PhysicalZt, &r.atlas)?;
    let h: H = [ph.c1, ph.c2, Complex64::new(1.0, 0.0)];
    let sc = norm(&h);
    let rx = r_big(&h);
    if norm(&rx) < 1e-12 * sc.powi(6) {
        return Err(MapError::Indeterminacy { label: "ℛ (homogeneous)".into(), margin: 1e-12 });
    }
    let px = psi(&h);
    let rpx = r_small(&px);
    if norm(&rpx) < 1e-12 * norm(&px).powi(4) {
        return Err(MapError::Indeterminacy { label: "R∘Ψ".into(), margin: 1e-12 });
    }
    Ok(proj_dist(&rpx, &psi(&rx)))
}

/// Ψ of a physical point, as a homogeneous vector.
pub fn psi_of(x: &ChartPoint) -> Result<H, MapError> {
    let r = catalog::cached("R")?;
    let ph = to_chart(x, ChartId::PhysicalZt, &r.atlas)?;
    Ok(psi(&[ph.c1, ph.c2, Complex64::new(1.0, 0.0)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_commutes_on_the_line() {
        assert!(semiconjugacy_residual(&ChartPoint::real(ChartId::PhysicalZt, 2.0, 0.0)).unwrap() <= 1e-12);
        for k in 0..16 {
            let z = Complex64::from_polar(1.0, 0.3 + k as f64);
            let x = ChartPoint::new(ChartId::PhysicalZt, z, Complex64::new(0.0, 0.0));
            assert!(semiconjugacy_residual(&x).unwrap() <= 1e-12);
            // Ψ lands on B = {V = 0, |U/W| = 1}
            let p = psi_of(&x).unwrap();
            assert_eq!(p[1].norm(), 0.0);
            assert!(((p[0] / p[2]).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn b0_is_refused() {
        assert!(semiconjugacy_residual(&ChartPoint::real(ChartId::PhysicalZt, 0.0, 0.0)).is_err());
    }
}
