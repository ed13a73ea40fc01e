//! Sparse bivariate and dense univariate polynomials over a generic ring.
//!
//! Terms are kept sorted by total degree, then by decreasing power of the
//! first variable, which is also the order of the dense serialized form.

use crate::error::CoreError;
use crate::precision::Scalar;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Coeff:
    Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync + std::fmt::Debug
{
}
impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + One + Neg<Output = T> + Sub<Output = T> + Send + Sync + std::fmt::Debug
{
}

fn key(i: u32, j: u32) -> (u32, u32) {
    (i + j, j)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly2<T = Complex64> {
    terms: Vec<(u32, u32, T)>,
}

impl<T: Coeff> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 { terms: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: T) -> Self {
        Self::from_terms([(i, j, c)])
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, T::one())
    }

    /// Combines like terms and drops exact zeros.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, T)>>(it: I) -> Self {
        let mut acc: BTreeMap<(u32, u32), (u32, u32, T)> = BTreeMap::new();
        for (i, j, c) in it {
            let e = acc.entry(key(i, j)).or_insert((i, j, T::zero()));
            e.2 = e.2.clone() + c;
        }
        Poly2 { terms: acc.into_values().filter(|t| !t.2.is_zero()).collect() }
    }

    pub fn terms(&self) -> &[(u32, u32, T)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    /// Smallest power of y present, None for the zero polynomial.
    pub fn y_valuation(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.1).min()
    }

    pub fn coeff(&self, i: u32, j: u32) -> T {
        self.terms.iter().find(|t| t.0 == i && t.1 == j).map(|t| t.2.clone()).unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(i, j, a)| (*i, *j, a.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(T::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        Poly2::from_terms(self.terms.iter().map(|(i, j, c)| (*i, *j, f(c))))
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| t.0 > 0).map(|(i, j, c)| (i - 1, *j, times(c, *i))))
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|t| t.1 > 0).map(|(i, j, c)| (*i, j - 1, times(c, *j))))
    }

    /// Coefficients in x of p(x, 0), ascending.
    pub fn restrict_y0(&self) -> Poly1<T> {
        let mut v = vec![T::zero(); self.deg_x() as usize + 1];
        for (i, j, c) in &self.terms {
            if *j == 0 {
                v[*i as usize] = c.clone();
            }
        }
        Poly1::new(v)
    }

    /// Coefficients of p as a polynomial in y with Poly1-in-x coefficients.
    pub fn by_y(&self) -> Vec<Poly1<T>> {
        let dx = self.deg_x() as usize;
        let mut rows = vec![vec![T::zero(); dx + 1]; self.deg_y() as usize + 1];
        for (i, j, c) in &self.terms {
            rows[*j as usize][*i as usize] = c.clone();
        }
        rows.into_iter().map(Poly1::new).collect()
    }

    /// Swaps the roles of the two variables.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(i, j, c)| (*j, *i, c.clone())))
    }

    /// Restriction to the line x = a + b s, y = c + d s.
    pub fn on_line(&self, a: &T, b: &T, c: &T, d: &T) -> Poly1<T> {
        let lx = Poly1::new(vec![a.clone(), b.clone()]);
        let ly = Poly1::new(vec![c.clone(), d.clone()]);
        let px: Vec<Poly1<T>> = powers(&lx, self.deg_x());
        let py: Vec<Poly1<T>> = powers(&ly, self.deg_y());
        let mut out = Poly1::zero();
        for (i, j, k) in &self.terms {
            let t = (&px[*i as usize] * &py[*j as usize]).scale(k);
            out = &out + &t;
        }
        out
    }
}

impl Poly2<Complex64> {
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        let mut xp = [Complex64::new(1.0, 0.0); 17];
        let mut yp = [Complex64::new(1.0, 0.0); 17];
        let (dx, dy) = (self.deg_x() as usize, self.deg_y() as usize);
        if dx < 17 && dy < 17 {
            for k in 1..=dx {
                xp[k] = xp[k - 1] * x;
            }
            for k in 1..=dy {
                yp[k] = yp[k - 1] * y;
            }
            return self.terms.iter().map(|(i, j, c)| c * xp[*i as usize] * yp[*j as usize]).sum();
        }
        self.terms.iter().map(|(i, j, c)| c * x.powu(*i) * y.powu(*j)).sum()
    }

    pub fn eval_scalar<S: Scalar>(&self, x: &S, y: &S) -> S {
        let xp = scalar_powers(x, self.deg_x());
        let yp = scalar_powers(y, self.deg_y());
        let mut acc = x.lift(Complex64::new(0.0, 0.0));
        for (i, j, c) in &self.terms {
            let m = xp[*i as usize].clone() * yp[*j as usize].clone();
            acc = acc + if *c == Complex64::new(1.0, 0.0) { m } else { m * x.lift(*c) };
        }
        acc
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.2.norm()).fold(0.0, f64::max)
    }

    /// Dense coefficient list by total-degree order: (0,0), (1,0), (0,1), (2,0), (1,1), ...
    pub fn to_dense(&self) -> DensePoly {
        let d = self.degree();
        let mut coeffs = Vec::new();
        for tot in 0..=d {
            for j in 0..=tot {
                let c = self.coeff(tot - j, j);
                coeffs.push([c.re, c.im]);
            }
        }
        DensePoly { degree: d, coeffs }
    }

    pub fn from_dense(d: &DensePoly) -> Result<Self, CoreError> {
        let need = ((d.degree + 1) * (d.degree + 2) / 2) as usize;
        if d.coeffs.len() != need {
            return Err(CoreError::Malformed(format!(
                "degree {} needs {} coefficients, got {}",
                d.degree,
                need,
                d.coeffs.len()
            )));
        }
        let mut terms = Vec::new();
        let mut k = 0;
        for tot in 0..=d.degree {
            for j in 0..=tot {
                let [re, im] = d.coeffs[k];
                if !(re.is_finite() && im.is_finite()) {
                    return Err(CoreError::NonFinite);
                }
                terms.push((tot - j, j, Complex64::new(re, im)));
                k += 1;
            }
        }
        Ok(Self::from_terms(terms))
    }
}

fn scalar_powers<S: Scalar>(x: &S, n: u32) -> Vec<S> {
    let mut v = Vec::with_capacity(n as usize + 1);
    v.push(x.lift(Complex64::new(1.0, 0.0)));
    for k in 1..=n as usize {
        let next = v[k - 1].clone() * x.clone();
        v.push(next);
    }
    v
}

fn times<T: Coeff>(c: &T, k: u32) -> T {
    let mut s = T::zero();
    for _ in 0..k {
        s = s + c.clone();
    }
    s
}

fn powers<T: Coeff>(p: &Poly1<T>, n: u32) -> Vec<Poly1<T>> {
    let mut v = vec![Poly1::new(vec![T::one()])];
    for k in 1..=n as usize {
        let next = &v[k - 1] * p;
        v.push(next);
    }
    v
}

/// Serialized form: `{"degree": d, "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensePoly {
    pub degree: u32,
    pub coeffs: Vec<[f64; 2]>,
}

impl Serialize for Poly2<Complex64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_dense().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly2<Complex64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let dense = DensePoly::deserialize(d)?;
        Poly2::from_dense(&dense).map_err(serde::de::Error::custom)
    }
}

impl<T: Coeff> Add for &Poly2<T> {
    type Output = Poly2<T>;
    fn add(self, o: &Poly2<T>) -> Poly2<T> {
        Poly2::from_terms(self.terms.iter().chain(o.terms.iter()).cloned())
    }
}

impl<T: Coeff> Sub for &Poly2<T> {
    type Output = Poly2<T>;
    fn sub(self, o: &Poly2<T>) -> Poly2<T> {
        Poly2::from_terms(self.terms.iter().cloned().chain(o.terms.iter().map(|(i, j, c)| (*i, *j, -c.clone()))))
    }
}

impl<T: Coeff> Mul for &Poly2<T> {
    type Output = Poly2<T>;
    fn mul(self, o: &Poly2<T>) -> Poly2<T> {
        let mut v = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (i, j, a) in &self.terms {
            for (k, l, b) in &o.terms {
                v.push((i + k, j + l, a.clone() * b.clone()));
            }
        }
        Poly2::from_terms(v)
    }
}

impl<T: Coeff> Neg for &Poly2<T> {
    type Output = Poly2<T>;
    fn neg(self) -> Poly2<T> {
        Poly2::from_terms(self.terms.iter().map(|(i, j, c)| (*i, *j, -c.clone())))
    }
}

/// Dense univariate polynomial, coefficients ascending, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly1<T> {
    c: Vec<T>,
}

impl<T: Coeff> Poly1<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly1 { c }
    }

    pub fn zero() -> Self {
        Poly1 { c: Vec::new() }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as None.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn scale(&self, k: &T) -> Self {
        Poly1::new(self.c.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// p(x) * x^k
    pub fn shift(&self, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.extend(self.c.iter().cloned());
        Poly1::new(v)
    }
}

impl<T: Coeff + Div<Output = T>> Poly1<T> {
    pub fn rem(&self, d: &Poly1<T>) -> Poly1<T> {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let q = r[k].clone() / lead.clone();
            for (i, di) in d.c.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = r[idx].clone() - q.clone() * di.clone();
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Poly1::new(r)
    }

    pub fn monic(&self) -> Poly1<T> {
        match self.c.last() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                Poly1::new(self.c.iter().map(|a| a.clone() / l.clone()).collect())
            }
        }
    }

    /// Euclidean gcd, normalized to be monic. Exact only over an exact field.
    pub fn gcd(&self, o: &Poly1<T>) -> Poly1<T> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

impl<T: Coeff> Add for &Poly1<T> {
    type Output = Poly1<T>;
    fn add(self, o: &Poly1<T>) -> Poly1<T> {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|k| {
                let a = self.c.get(k).cloned().unwrap_or_else(T::zero);
                let b = o.c.get(k).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Poly1::new(v)
    }
}

impl<T: Coeff> Sub for &Poly1<T> {
    type Output = Poly1<T>;
    fn sub(self, o: &Poly1<T>) -> Poly1<T> {
        let neg = Poly1::new(o.c.iter().map(|a| -a.clone()).collect());
        self + &neg
    }
}

impl<T: Coeff> Mul for &Poly1<T> {
    type Output = Poly1<T>;
    fn mul(self, o: &Poly1<T>) -> Poly1<T> {
        if self.is_zero() || o.is_zero() {
            return Poly1::zero();
        }
        let mut v = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly1::new(v)
    }
}

impl Poly1<Complex64> {
    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }
}
