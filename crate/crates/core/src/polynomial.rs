//! Power-basis polynomials over floats, intervals, rationals and surds.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigRational, One, Zero};

use crate::exact::{rat_int, rat_interval, rat_to_f64, Rational, Surd};
use crate::interval::Interval;

pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_i64(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
}

impl Scalar for f64 {
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        rat_to_f64(q)
    }
}

impl Scalar for Interval {
    fn from_i64(n: i64) -> Self {
        rat_interval(&rat_int(n))
    }
    fn from_rational(q: &Rational) -> Self {
        rat_interval(q)
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        rat_int(n)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Scalar for Surd {
    fn from_i64(n: i64) -> Self {
        Surd::int(n)
    }
    fn from_rational(q: &Rational) -> Self {
        Surd::rational(q.clone())
    }
}

/// Coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    pub c: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(c: Vec<T>) -> Self {
        Poly { c }.trimmed()
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn constant(x: T) -> Self {
        Poly::new(vec![x])
    }

    /// `t - s`
    pub fn linear_root(s: T) -> Self {
        Poly::new(vec![-s, T::one()])
    }

    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Poly::constant(T::one()), |acc, r| acc.mul(&Poly::linear_root(r.clone())))
    }

    fn trimmed(mut self) -> Self {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        self
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: usize) -> T {
        self.c.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, t: &T) -> T {
        self.c.iter().rev().fold(T::zero(), |acc, x| acc * t.clone() + x.clone())
    }

    pub fn add(&self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly<T>) -> Poly<T> {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly<T>) -> Poly<T> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &T) -> Poly<T> {
        Poly::new(self.c.iter().map(|x| x.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Poly<T> {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(k, x)| x.clone() * T::from_i64(k as i64)).collect())
    }

    pub fn nth_derivative(&self, k: usize) -> Poly<T> {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.c.iter().map(f).collect())
    }
}

impl Poly<Rational> {
    pub fn to_interval(&self) -> Poly<Interval> {
        self.map(rat_interval)
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(rat_to_f64)
    }

    pub fn to_surd(&self) -> Poly<Surd> {
        self.map(|q| Surd::rational(q.clone()))
    }
}

impl Poly<Surd> {
    pub fn to_interval(&self) -> Poly<Interval> {
        self.map(Surd::to_interval)
    }
}

impl Poly<Interval> {
    pub fn mid(&self) -> Poly<f64> {
        Poly { c: self.c.iter().map(|x| x.mid()).collect() }
    }

    pub fn range(&self, t: Interval) -> Interval {
        crate::interval::poly_range_cell(&self.c, t)
    }
}

impl Poly<f64> {
    pub fn to_interval(&self) -> Poly<Interval> {
        Poly { c: self.c.iter().map(|&x| Interval::point(x)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn roots_and_eval() {
        let p = Poly::from_roots(&[rat(1, 1), rat(-3, 5), rat(-3, 5)]);
        assert_eq!(p.degree(), 3);
        assert!(p.eval(&rat(-3, 5)).is_zero());
        assert_eq!(p.coeff(3), rat(1, 1));
        assert_eq!(p.derivative().eval(&rat(-3, 5)), rat(0, 1));
    }

    #[test]
    fn arithmetic_trims() {
        let a = Poly::new(vec![1.0, 2.0, 3.0]);
        let b = Poly::new(vec![0.0, 0.0, 3.0]);
        assert_eq!(a.sub(&b).degree(), 1);
        assert!(a.sub(&a).is_zero());
    }
}
