//! Coefficient fields for the foliation series: exact Gaussian rationals,
//! f64 complex numbers, and Gaussian integers modulo a prime p ≡ 3 (mod 4),
//! i.e. the finite field F_{p²}. The last one is exact and cheap; it gives
//! the true Laurent support unless a coefficient happens to vanish mod p.

use circlelab_core::exact::{gauss_from_c64, gauss_to_c64};
use circlelab_core::{Complex64, GaussRat};
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait SeriesField: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_int(n: i64) -> Self;
    /// Exact image of a dyadic complex number, when the field has one.
    fn from_c64(c: Complex64) -> Option<Self>;
    /// Complex value, for fields embedded in C.
    fn to_c64(&self) -> Option<Complex64>;
    /// (re, im) as text; exact fields print fractions such as "-2/3".
    fn parts(&self) -> (String, String);
    fn name() -> &'static str;
}

impl SeriesField for GaussRat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(<GaussRat as One>::one() / self)
        }
    }
    fn from_int(n: i64) -> Self {
        GaussRat::new(num_rational::BigRational::from_integer(n.into()), Zero::zero())
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        gauss_from_c64(c).ok()
    }
    fn to_c64(&self) -> Option<Complex64> {
        Some(gauss_to_c64(self))
    }
    fn parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn name() -> &'static str {
        "exact"
    }
}

impl SeriesField for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn inv(&self) -> Option<Self> {
        let v = 1.0 / self;
        v.is_finite().then_some(v)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn to_c64(&self) -> Option<Complex64> {
        Some(*self)
    }
    fn parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn name() -> &'static str {
        "float"
    }
}

/// a + bi with a, b in Z/P. P must be a prime ≡ 3 (mod 4), below 2^62.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussModP<const P: u64> {
    re: u64,
    im: u64,
}

pub type GaussM61 = GaussModP<{ (1 << 61) - 1 }>;
pub type GaussM31 = GaussModP<{ (1 << 31) - 1 }>;

fn mulmod<const P: u64>(a: u64, b: u64) -> u64 {
    let x = a as u128 * b as u128;
    if (P + 1).is_power_of_two() {
        // Mersenne prime: 2^k ≡ 1
        let k = P.trailing_ones();
        let folded = (x & P as u128) + (x >> k);
        let folded = (folded & P as u128) + (folded >> k);
        let r = folded as u64;
        if r >= P {
            r - P
        } else {
            r
        }
    } else {
        (x % P as u128) as u64
    }
}

fn powmod<const P: u64>(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod::<P>(acc, a);
        }
        a = mulmod::<P>(a, a);
        e >>= 1;
    }
    acc
}

fn from_i128<const P: u64>(n: i128) -> u64 {
    n.rem_euclid(P as i128) as u64
}

/// Residue of a finite f64, which is m · 2^e exactly.
fn dyadic<const P: u64>(x: f64) -> Option<u64> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
    let m = from_i128::<P>(sign * m as i128);
    let two = if e >= 0 { 2 } else { powmod::<P>(2, P - 2) };
    Some(mulmod::<P>(m, powmod::<P>(two, e.unsigned_abs())))
}

impl<const P: u64> GaussModP<P> {
    pub fn new(re: i64, im: i64) -> Self {
        GaussModP { re: from_i128::<P>(re as i128), im: from_i128::<P>(im as i128) }
    }

    pub fn residues(&self) -> (u64, u64) {
        (self.re, self.im)
    }
}

impl<const P: u64> SeriesField for GaussModP<P> {
    fn zero() -> Self {
        GaussModP { re: 0, im: 0 }
    }
    fn one() -> Self {
        GaussModP { re: 1, im: 0 }
    }
    fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }
    fn add(&self, o: &Self) -> Self {
        GaussModP { re: (self.re + o.re) % P, im: (self.im + o.im) % P }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussModP { re: (self.re + P - o.re) % P, im: (self.im + P - o.im) % P }
    }
    fn mul(&self, o: &Self) -> Self {
        let rr = mulmod::<P>(self.re, o.re);
        let ii = mulmod::<P>(self.im, o.im);
        let ri = mulmod::<P>(self.re, o.im);
        let ir = mulmod::<P>(self.im, o.re);
        GaussModP { re: (rr + P - ii) % P, im: (ri + ir) % P }
    }
    fn inv(&self) -> Option<Self> {
        // (a + bi)⁻¹ = (a − bi)/(a² + b²); a² + b² ≠ 0 because −1 is not a square mod P
        let n = (mulmod::<P>(self.re, self.re) + mulmod::<P>(self.im, self.im)) % P;
        if n == 0 {
            return None;
        }
        let ni = powmod::<P>(n, P - 2);
        Some(GaussModP { re: mulmod::<P>(self.re, ni), im: mulmod::<P>((P - self.im) % P, ni) })
    }
    fn from_int(n: i64) -> Self {
        GaussModP::new(n, 0)
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(GaussModP { re: dyadic::<P>(c.re)?, im: dyadic::<P>(c.im)? })
    }
    fn to_c64(&self) -> Option<Complex64> {
        None
    }
    fn parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn name() -> &'static str {
        "mod-p"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_p_field_axioms() {
        let a = GaussM61::new(3, -7);
        let b = GaussM61::new(-11, 5);
        let ai = a.inv().unwrap();
        assert_eq!(a.mul(&ai), GaussM61::one());
        assert_eq!(a.mul(&b), b.mul(&a));
        // i² = −1
        let i = GaussM61::new(0, 1);
        assert_eq!(i.mul(&i), GaussM61::new(-1, 0));
        // 0.75 = 3/4
        let q = GaussM61::from_c64(Complex64::new(0.75, 0.0)).unwrap();
        assert_eq!(q.mul(&GaussM61::from_int(4)), GaussM61::from_int(3));
        let small = GaussM31::from_c64(Complex64::new(-0.5, 2.0)).unwrap();
        assert_eq!(small.mul(&GaussM31::from_int(2)), GaussM31::new(-1, 4));
    }

    #[test]
    fn exact_parts_print_fractions() {
        let x = GaussRat::from_int(-2).mul(&SeriesField::inv(&GaussRat::from_int(3)).unwrap());
        assert_eq!(x.parts(), ("-2/3".to_string(), "0".to_string()));
    }
}
