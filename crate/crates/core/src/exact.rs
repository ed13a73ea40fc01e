//! Exact Gaussian rationals.

use crate::error::CoreError;
use crate::poly::Poly2;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub type GaussRat = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

/// f64 values are dyadic rationals, so this conversion is exact.
pub fn gauss_from_c64(c: Complex64) -> Result<GaussRat, CoreError> {
    let re = BigRational::from_float(c.re).ok_or(CoreError::NonFinite)?;
    let im = BigRational::from_float(c.im).ok_or(CoreError::NonFinite)?;
    Ok(Complex::new(re, im))
}

pub fn gauss_to_c64(c: &GaussRat) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

pub fn poly_to_exact(p: &Poly2<Complex64>) -> Result<Poly2<GaussRat>, CoreError> {
    let mut terms = Vec::with_capacity(p.terms().len());
    for (i, j, c) in p.terms() {
        terms.push((*i, *j, gauss_from_c64(*c)?));
    }
    Ok(Poly2::from_terms(terms))
}

pub fn is_real(c: &GaussRat) -> bool {
    c.im.is_zero()
}
