//! Extended-range complex numbers: an f64 mantissa pair with a shared
//! 64-bit binary exponent. 53-bit precision, but magnitudes such as
//! 10^(-10^9) stay representable, which superattracting orbits reach in a
//! few dozen steps.

use crate::precision::Scalar;
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

const EXP_LIMIT: i64 = 1 << 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtC {
    m: Complex64,
    e: i64,
}

/// x · 2^n without intermediate overflow.
fn ldexp(mut x: f64, mut n: i64) -> f64 {
    while n > 1000 {
        x *= 2f64.powi(1000);
        n -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while n < -1000 {
        x *= 2f64.powi(-1000);
        n += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(n as i32)
}

fn ldexp_c(z: Complex64, n: i64) -> Complex64 {
    Complex64::new(ldexp(z.re, n), ldexp(z.im, n))
}

impl ExtC {
    pub const ZERO: ExtC = ExtC { m: Complex64::new(0.0, 0.0), e: 0 };

    pub fn new(z: Complex64) -> Self {
        ExtC { m: z, e: 0 }.normalized()
    }

    /// z · 2^e.
    pub fn from_parts(z: Complex64, e: i64) -> Self {
        ExtC { m: z, e }.normalized()
    }

    pub fn mantissa(&self) -> Complex64 {
        self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    fn normalized(self) -> Self {
        let a = self.m.re.abs().max(self.m.im.abs());
        if a == 0.0 {
            return ExtC::ZERO;
        }
        if !a.is_finite() {
            return self;
        }
        // a = f · 2^k with f in [0.5, 1)
        let (_, k) = frexp(a);
        let e = self.e.saturating_add(k);
        if e < -EXP_LIMIT {
            // below 2^(-2^60): indistinguishable from zero for any purpose here
            return ExtC::ZERO;
        }
        if e > EXP_LIMIT {
            return ExtC { m: Complex64::new(f64::INFINITY, 0.0), e: 0 };
        }
        ExtC { m: ldexp_c(self.m, -k), e }
    }

    pub fn norm(&self) -> f64 {
        ldexp(self.m.norm(), self.e)
    }
}

fn frexp(a: f64) -> (f64, i64) {
    let bits = a.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        // subnormal: scale up first
        let (f, k) = frexp(a * 2f64.powi(64));
        return (f, k - 64);
    }
    let k = exp - 1022;
    (ldexp(a, -k), k)
}

impl Add for ExtC {
    type Output = ExtC;
    fn add(self, o: ExtC) -> ExtC {
        if o.m.re == 0.0 && o.m.im == 0.0 {
            return self;
        }
        if self.m.re == 0.0 && self.m.im == 0.0 {
            return o;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 64 {
            return big;
        }
        ExtC { m: big.m + ldexp_c(small.m, -d), e: big.e }.normalized()
    }
}

impl Sub for ExtC {
    type Output = ExtC;
    fn sub(self, o: ExtC) -> ExtC {
        self + (-o)
    }
}

impl Neg for ExtC {
    type Output = ExtC;
    fn neg(self) -> ExtC {
        ExtC { m: -self.m, e: self.e }
    }
}

impl Mul for ExtC {
    type Output = ExtC;
    fn mul(self, o: ExtC) -> ExtC {
        ExtC { m: self.m * o.m, e: self.e.saturating_add(o.e) }.normalized()
    }
}

impl Div for ExtC {
    type Output = ExtC;
    fn div(self, o: ExtC) -> ExtC {
        ExtC { m: self.m / o.m, e: self.e.saturating_sub(o.e) }.normalized()
    }
}

impl Scalar for ExtC {
    fn lift(&self, c: Complex64) -> Self {
        ExtC::new(c)
    }

    fn to_c64(&self) -> Complex64 {
        ldexp_c(self.m, self.e)
    }

    fn ln_abs(&self) -> f64 {
        self.m.norm().ln() + self.e as f64 * std::f64::consts::LN_2
    }

    fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    fn sqrt(&self) -> Self {
        let (m, e) = if self.e % 2 != 0 { (self.m * 2.0, self.e - 1) } else { (self.m, self.e) };
        ExtC { m: m.sqrt(), e: e / 2 }.normalized()
    }

    fn abs(&self) -> f64 {
        self.norm()
    }
}
