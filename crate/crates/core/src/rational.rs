use crate::error::CoreError;
use crate::exact::{gauss, poly_to_exact, rat, GaussRat};
use crate::poly::Poly2;
use crate::precision::Scalar;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A pair of rational functions (num1/den1, num2/den2) in two variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Repr", into = "Repr")]
pub struct RationalPair {
    num1: Poly2,
    den1: Poly2,
    num2: Poly2,
    den2: Poly2,
    // partial derivatives, in the order d/dx then d/dy of num1, den1, num2, den2
    d: [[Poly2; 2]; 4],
}

#[derive(Serialize, Deserialize)]
struct Repr {
    num1: Poly2,
    den1: Poly2,
    num2: Poly2,
    den2: Poly2,
}

impl TryFrom<Repr> for RationalPair {
    type Error = CoreError;
    fn try_from(r: Repr) -> Result<Self, CoreError> {
        RationalPair::new(r.num1, r.den1, r.num2, r.den2)
    }
}

impl From<RationalPair> for Repr {
    fn from(r: RationalPair) -> Repr {
        Repr { num1: r.num1, den1: r.den1, num2: r.num2, den2: r.den2 }
    }
}

fn lines() -> [[GaussRat; 4]; 2] {
    let g = |n, d| gauss(rat(n, d), rat(0, 1));
    let gi = |n, d, m, e| gauss(rat(n, d), rat(m, e));
    [[g(3, 7), g(1, 1), g(-2, 5), gi(5, 3, 1, 9)], [gi(-5, 11, 2, 7), g(2, 3), g(7, 13), g(-1, 1)]]
}

/// True when num and den provably share no factor: their restrictions to
/// some fixed generic line are coprime.
pub fn coprime(num: &Poly2, den: &Poly2) -> Result<bool, CoreError> {
    if den.degree() == 0 || num.is_zero() {
        return Ok(true);
    }
    let (n, d) = (poly_to_exact(num)?, poly_to_exact(den)?);
    for l in lines() {
        let a = n.on_line(&l[0], &l[1], &l[2], &l[3]);
        let b = d.on_line(&l[0], &l[1], &l[2], &l[3]);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        if a.gcd(&b).degree() == Some(0) {
            return Ok(true);
        }
    }
    Ok(false)
}

impl RationalPair {
    pub fn new(num1: Poly2, den1: Poly2, num2: Poly2, den2: Poly2) -> Result<Self, CoreError> {
        if den1.is_zero() || den2.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        if !coprime(&num1, &den1)? || !coprime(&num2, &den2)? {
            return Err(CoreError::NotCoprime);
        }
        let d = [&num1, &den1, &num2, &den2].map(|p| [p.partial_x(), p.partial_y()]);
        Ok(RationalPair { num1, den1, num2, den2, d })
    }

    /// Polynomial map: both denominators are 1.
    pub fn polynomial(p1: Poly2, p2: Poly2) -> Result<Self, CoreError> {
        let one = Poly2::constant(Complex64::new(1.0, 0.0));
        Self::new(p1, one.clone(), p2, one)
    }

    pub fn num1(&self) -> &Poly2 {
        &self.num1
    }
    pub fn den1(&self) -> &Poly2 {
        &self.den1
    }
    pub fn num2(&self) -> &Poly2 {
        &self.num2
    }
    pub fn den2(&self) -> &Poly2 {
        &self.den2
    }

    pub fn is_polynomial(&self) -> bool {
        self.den1.degree() == 0 && self.den2.degree() == 0
    }

    pub fn parts(&self, x: Complex64, y: Complex64) -> [Complex64; 4] {
        [self.num1.eval(x, y), self.den1.eval(x, y), self.num2.eval(x, y), self.den2.eval(x, y)]
    }

    /// Unchecked quotient evaluation.
    pub fn eval(&self, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
        let [n1, d1, n2, d2] = self.parts(x, y);
        (n1 / d1, n2 / d2)
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S, y: &S) -> (S, S) {
        let n1 = self.num1.eval_scalar(x, y);
        let d1 = self.den1.eval_scalar(x, y);
        let n2 = self.num2.eval_scalar(x, y);
        let d2 = self.den2.eval_scalar(x, y);
        (n1 / d1, n2 / d2)
    }

    /// Jacobian of the quotient map, rows = output coordinates.
    pub fn jacobian(&self, x: Complex64, y: Complex64) -> [[Complex64; 2]; 2] {
        let [n1, d1, n2, d2] = self.parts(x, y);
        let e = |k: usize, v: usize| self.d[k][v].eval(x, y);
        let q = |n: Complex64, d: Complex64, kn: usize, kd: usize, v: usize| (e(kn, v) * d - n * e(kd, v)) / (d * d);
        [[q(n1, d1, 0, 1, 0), q(n1, d1, 0, 1, 1)], [q(n2, d2, 2, 3, 0), q(n2, d2, 2, 3, 1)]]
    }
}
