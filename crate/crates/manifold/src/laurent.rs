use crate::field::SeriesField;
use circlelab_core::Complex64;
use rayon::prelude::*;

/// Σ c[k] z^(lo + k), trimmed so the end coefficients are nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Laurent<F> {
    lo: i64,
    c: Vec<F>,
}

/// Convolutions longer than this run in parallel over output modes.
const PAR_THRESHOLD: usize = 1 << 14;

impl<F: SeriesField> Laurent<F> {
    pub fn zero() -> Self {
        Laurent { lo: 0, c: Vec::new() }
    }

    pub fn monomial(k: i64, v: F) -> Self {
        Laurent { lo: k, c: vec![v] }.trimmed()
    }

    pub fn from_coeffs(lo: i64, c: Vec<F>) -> Self {
        Laurent { lo, c }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead == self.c.len() {
            return Laurent::zero();
        }
        self.c.drain(..lead);
        self.lo += lead as i64;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Lowest and highest modes with nonzero coefficient.
    pub fn mode_range(&self) -> Option<(i64, i64)> {
        (!self.c.is_empty()).then(|| (self.lo, self.lo + self.c.len() as i64 - 1))
    }

    /// hi − lo; zero for monomials and for the zero polynomial.
    pub fn bandwidth(&self) -> i64 {
        self.mode_range().map_or(0, |(l, h)| h - l)
    }

    /// hi − lo + 1, or 0 for the zero polynomial.
    pub fn mode_count(&self) -> i64 {
        self.c.len() as i64
    }

    pub fn coeff(&self, k: i64) -> F {
        let i = k - self.lo;
        if i < 0 || i >= self.c.len() as i64 {
            F::zero()
        } else {
            self.c[i as usize].clone()
        }
    }

    /// Nonzero (mode, coefficient) pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| (self.lo + i as i64, v))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, |a, b| a.sub(b))
    }

    fn combine(&self, o: &Self, f: impl Fn(&F, &F) -> F) -> Self {
        let (Some((l1, h1)), Some((l2, h2))) = (self.mode_range(), o.mode_range()) else {
            if o.is_zero() {
                return self.clone();
            }
            return Laurent::zero().combine_slow(o, &f);
        };
        let lo = l1.min(l2);
        let hi = h1.max(h2);
        let c = (lo..=hi).map(|k| f(&self.coeff(k), &o.coeff(k))).collect();
        Laurent { lo, c }.trimmed()
    }

    fn combine_slow(&self, o: &Self, f: &impl Fn(&F, &F) -> F) -> Self {
        let c = o.c.iter().map(|b| f(&F::zero(), b)).collect();
        Laurent { lo: o.lo, c }.trimmed()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let (a, b) = (&self.c, &o.c);
        let n = a.len() + b.len() - 1;
        let at = |k: usize| {
            let i0 = k.saturating_sub(b.len() - 1);
            let i1 = k.min(a.len() - 1);
            let mut s = F::zero();
            for i in i0..=i1 {
                s = s.add(&a[i].mul(&b[k - i]));
            }
            s
        };
        let c: Vec<F> = if a.len() * b.len() > PAR_THRESHOLD {
            (0..n).into_par_iter().map(at).collect()
        } else {
            (0..n).map(at).collect()
        };
        Laurent { lo: self.lo + o.lo, c }.trimmed()
    }

    pub fn scale(&self, s: &F) -> Self {
        Laurent { lo: self.lo, c: self.c.iter().map(|x| x.mul(s)).collect() }.trimmed()
    }

    /// Multiply by z^k.
    pub fn shift(&self, k: i64) -> Self {
        Laurent { lo: self.lo + k, c: self.c.clone() }
    }

    /// a(z^b): mode k moves to mode b·k.
    pub fn dilate(&self, b: u32) -> Self {
        if self.is_zero() || b == 1 {
            return self.clone();
        }
        let b = b as usize;
        let mut c = vec![F::zero(); (self.c.len() - 1) * b + 1];
        for (i, v) in self.c.iter().enumerate() {
            c[i * b] = v.clone();
        }
        Laurent { lo: self.lo * b as i64, c }
    }

    pub fn map<G: SeriesField>(&self, f: impl Fn(&F) -> G) -> Laurent<G> {
        Laurent { lo: self.lo, c: self.c.iter().map(f).collect() }.trimmed()
    }

    /// Complex value at z, for fields embedded in C.
    pub fn eval(&self, z: Complex64) -> Option<Complex64> {
        if self.is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for v in self.c.iter().rev() {
            s = s * z + v.to_c64()?;
        }
        Some(s * z.powi(self.lo as i32))
    }

    /// ln max_{|z| = r} |a(z)|, sampled at `n` equispaced angles, computed
    /// with the largest term factored out so large modes cannot overflow.
    pub fn ln_max_on_circle(&self, r: f64, n: usize) -> Option<f64> {
        if self.is_zero() {
            return Some(f64::NEG_INFINITY);
        }
        let lr = r.ln();
        let vals: Vec<Complex64> = self.c.iter().map(|v| v.to_c64()).collect::<Option<_>>()?;
        let logs: Vec<f64> =
            vals.iter().enumerate().map(|(i, v)| v.norm().ln() + (self.lo + i as i64) as f64 * lr).collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Some(top);
        }
        // scaled coefficients c_k r^k e^{-top}, then Horner in e^{iθ}
        let scaled: Vec<Complex64> = vals
            .iter()
            .zip(&logs)
            .map(|(v, l)| if v.norm() == 0.0 { *v } else { v / v.norm() * (l - top).exp() })
            .collect();
        let mut best = 0.0f64;
        for k in 0..n {
            let u = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64);
            let mut s = Complex64::new(0.0, 0.0);
            for v in scaled.iter().rev() {
                s = s * u + v;
            }
            best = best.max(s.norm());
        }
        Some(top + best.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GaussM61;

    fn l(lo: i64, c: &[i64]) -> Laurent<GaussM61> {
        Laurent::from_coeffs(lo, c.iter().map(|&x| GaussM61::from_int(x)).collect())
    }

    #[test]
    fn arithmetic_and_dilation() {
        // (z⁻¹ + 2)(3z) = 3 + 6z
        assert_eq!(l(-1, &[1, 2]).mul(&l(1, &[3])), l(0, &[3, 6]));
        assert_eq!(l(-1, &[1, 2]).sub(&l(-1, &[1, 0])), l(0, &[2]));
        // (z⁻¹ + 2)(z³) = z⁻³ + 2
        assert_eq!(l(-1, &[1, 2]).dilate(3), l(-3, &[1, 0, 0, 2]));
        assert_eq!(l(-1, &[1, 2]).dilate(3).bandwidth(), 3);
        assert!(l(0, &[0, 0]).is_zero());
    }

    #[test]
    fn circle_maximum() {
        // |z + 1| on |z| = 2 peaks at 3
        let a: Laurent<Complex64> = Laurent::from_coeffs(0, vec![Complex64::new(1.0, 0.0); 2]);
        assert!((a.ln_max_on_circle(2.0, 64).unwrap() - 3f64.ln()).abs() < 1e-12);
        let z = Complex64::new(0.3, -0.4);
        assert!((a.eval(z).unwrap() - (z + 1.0)).norm() < 1e-15);
    }
}
