//! Precision policy. Floating work runs either in f64 (15 digits) or in
//! binary floats with a configurable mantissa and an effectively unbounded
//! exponent; the latter also covers magnitudes far below f64's range.

use crate::error::CoreError;
use dashu_float::ops::SquareRoot;
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use num_complex::{Complex, Complex64};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type BigReal = FBig<HalfEven, 2>;
pub type BigC = Complex<BigReal>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_digits: u32,
    pub exact_mode: bool,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_digits: 15, exact_mode: false }
    }
}

impl PrecisionContext {
    pub fn new(working_digits: u32, exact_mode: bool) -> Result<Self, CoreError> {
        let ctx = PrecisionContext { working_digits, exact_mode };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn exact() -> Self {
        PrecisionContext { working_digits: 15, exact_mode: true }
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.working_digits < 15 {
            return Err(CoreError::InvalidPrecision(self.working_digits));
        }
        Ok(())
    }

    /// Mantissa bits for the extended type, with a few guard bits.
    pub fn bits(&self) -> usize {
        (self.working_digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 8
    }

    /// f64 is enough for 15 digits; anything more needs the extended type.
    pub fn needs_extended(&self) -> bool {
        self.working_digits > 15
    }

    /// Relative accuracy promised by this context.
    pub fn epsilon(&self) -> f64 {
        10f64.powi(1 - self.working_digits as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorModel {
    Floating { digits: u32 },
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tagged<T> {
    pub value: T,
    pub model: ErrorModel,
}

/// Whether an operation can honour exact mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arith {
    /// Root finding, orbit iteration and the like.
    FloatingOnly(&'static str),
    ExactCapable,
}

/// Runs `f` under `ctx` and tags the result with the error model used.
pub fn with_precision<T, E, F>(ctx: &PrecisionContext, kind: Arith, f: F) -> Result<Tagged<T>, E>
where
    E: From<CoreError>,
    F: FnOnce(&PrecisionContext) -> Result<T, E>,
{
    ctx.validate()?;
    let model = match (ctx.exact_mode, kind) {
        (true, Arith::FloatingOnly(what)) => return Err(CoreError::ExactUnsupported(what.to_string()).into()),
        (true, Arith::ExactCapable) => ErrorModel::Exact,
        (false, _) => ErrorModel::Floating { digits: ctx.working_digits },
    };
    let value = f(ctx)?;
    Ok(Tagged { value, model })
}

/// Complex field element usable by the generic evaluators.
pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant carrying the same precision as `self`.
    fn lift(&self, c: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    /// log|x|, finite even when |x| is far below f64 range; -inf at 0.
    fn ln_abs(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// Principal square root.
    fn sqrt(&self) -> Self;

    fn abs(&self) -> f64 {
        self.ln_abs().exp()
    }

    fn powu(&self, n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.lift(Complex64::new(1.0, 0.0));
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for Complex64 {
    fn lift(&self, c: Complex64) -> Self {
        c
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn ln_abs(&self) -> f64 {
        self.norm().ln()
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn sqrt(&self) -> Self {
        Complex64::sqrt(*self)
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
}

pub fn big_real(x: f64, bits: usize) -> BigReal {
    if x == 0.0 {
        return BigReal::ZERO.with_precision(bits).value();
    }
    BigReal::try_from(x).expect("finite f64").with_precision(bits).value()
}

pub fn big_c(z: Complex64, bits: usize) -> BigC {
    Complex::new(big_real(z.re, bits), big_real(z.im, bits))
}

fn bits_of(x: &BigReal) -> usize {
    x.precision().max(53)
}

fn real_is_zero(x: &BigReal) -> bool {
    *x == BigReal::ZERO
}

fn real_ln(x: &BigReal) -> f64 {
    if real_is_zero(x) {
        return f64::NEG_INFINITY;
    }
    x.ln().to_f64().value()
}

impl Scalar for BigC {
    fn lift(&self, c: Complex64) -> Self {
        big_c(c, bits_of(&self.re).max(bits_of(&self.im)))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn ln_abs(&self) -> f64 {
        let n2 = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        0.5 * real_ln(&n2)
    }

    fn is_zero(&self) -> bool {
        real_is_zero(&self.re) && real_is_zero(&self.im)
    }

    fn sqrt(&self) -> Self {
        let bits = bits_of(&self.re).max(bits_of(&self.im));
        let zero = BigReal::ZERO.with_precision(bits).value();
        if Scalar::is_zero(self) {
            return Complex::new(zero.clone(), zero);
        }
        let two = big_real(2.0, bits);
        let r = (self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()).sqrt();
        if self.re >= zero {
            let s = ((r + self.re.clone()) / two.clone()).sqrt();
            let im = self.im.clone() / (two * s.clone());
            Complex::new(s, im)
        } else {
            let s = ((r - self.re.clone()) / two.clone()).sqrt();
            let re = if self.im >= zero { self.im.clone() } else { -self.im.clone() } / (two * s.clone());
            let im = if self.im >= zero { s } else { -s };
            Complex::new(re, im)
        }
    }
}
