//! Outward-rounded interval arithmetic.
//!
//! Basic operations use error-free transforms (two-sum, fma residuals) to pick
//! the correctly rounded side, so exact results stay exact and inexact ones are
//! widened by a single ulp. Transcendental functions go through libm and are
//! widened by a few ulps on each side.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Ulps of slack added around libm results.
const LIBM_ULPS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

fn widen_down(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| down(v))
}

fn widen_up(x: f64, n: u32) -> f64 {
    (0..n).fold(x, |v, _| up(v))
}

/// Rounded sum with directed bounds `(lower, upper)`.
fn add_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return if s.is_nan() { (f64::NEG_INFINITY, f64::INFINITY) } else { (down(s).min(s), up(s).max(s)) };
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err == 0.0 {
        (s, s)
    } else if err > 0.0 {
        (s, up(s))
    } else {
        (down(s), s)
    }
}

/// Below this magnitude fma residuals may be inexact, so both sides are widened.
const TINY: f64 = 1e-290;

/// Product of endpoints with 0 * inf = 0, as is standard for interval endpoints.
fn mul_bounds(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 || b == 0.0 {
        return (0.0, 0.0);
    }
    let p = a * b;
    if p.is_infinite() {
        return if p > 0.0 { (f64::MAX, p) } else { (p, f64::MIN) };
    }
    if p.abs() < TINY {
        return (down(p), up(p));
    }
    let err = a.mul_add(b, -p);
    if err == 0.0 {
        (p, p)
    } else if err > 0.0 {
        (p, up(p))
    } else {
        (down(p), p)
    }
}

fn div_bounds(a: f64, b: f64) -> (f64, f64) {
    if a == 0.0 {
        return (0.0, 0.0);
    }
    if b.is_infinite() {
        return if a.is_infinite() { (f64::NEG_INFINITY, f64::INFINITY) } else { (0.0, 0.0) };
    }
    let q = a / b;
    if q.is_infinite() {
        return if a.is_infinite() { (q, q) } else if q > 0.0 { (f64::MAX, q) } else { (q, f64::MIN) };
    }
    if q.abs() < TINY {
        return (down(q), up(q));
    }
    // sign of a - q*b tells whether q under- or over-estimates a/b
    let r = (-q).mul_add(b, a);
    if r == 0.0 {
        (q, q)
    } else if r * b.signum() > 0.0 {
        (q, up(q))
    } else {
        (down(q), q)
    }
}

impl Interval {
    /// Panics if `lo > hi` or either endpoint is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::Domain(format!("invalid interval [{lo}, {hi}]")))
        }
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub const ZERO: Interval = Interval::point(0.0);
    pub const ONE: Interval = Interval::point(1.0);
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn mid(&self) -> f64 {
        if self.lo.is_infinite() || self.hi.is_infinite() {
            if self.lo.is_infinite() && self.hi.is_infinite() {
                0.0
            } else if self.lo.is_infinite() {
                self.hi.min(0.0) - 1.0
            } else {
                self.lo.max(0.0) + 1.0
            }
        } else {
            let m = 0.5 * self.lo + 0.5 * self.hi;
            m.clamp(self.lo, self.hi)
        }
    }

    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi })
    }

    pub fn is_nonneg(&self) -> bool {
        self.lo >= 0.0
    }

    pub fn is_nonpos(&self) -> bool {
        self.hi <= 0.0
    }

    pub fn is_pos(&self) -> bool {
        self.lo > 0.0
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let (lo, _) = mul_bounds(a.lo, a.lo);
        let (_, hi) = mul_bounds(a.hi, a.hi);
        Interval { lo, hi }
    }

    /// Integer power with exact even-power tightening.
    pub fn powi(&self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if n % 2 == 0 {
            let a = self.abs();
            Interval { lo: pos_powi(a.lo, n).0, hi: pos_powi(a.hi, n).1 }
        } else if self.lo >= 0.0 {
            Interval { lo: pos_powi(self.lo, n).0, hi: pos_powi(self.hi, n).1 }
        } else if self.hi <= 0.0 {
            -(-*self).powi(n)
        } else {
            Interval { lo: -pos_powi(-self.lo, n).1, hi: pos_powi(self.hi, n).1 }
        }
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("sqrt of interval with negative part {self}")));
        }
        Ok(Interval { lo: sqrt_bounds(self.lo).0, hi: sqrt_bounds(self.hi).1 })
    }

    pub fn exp(&self) -> Interval {
        let lo = widen_down(self.lo.exp(), LIBM_ULPS).max(0.0);
        let hi = if self.hi == f64::INFINITY { f64::INFINITY } else { widen_up(self.hi.exp(), LIBM_ULPS) };
        Interval { lo, hi }
    }

    /// Natural log on a nonnegative interval; `ln(0) = -inf`.
    pub fn ln(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("ln of interval with negative part {self}")));
        }
        let f = |x: f64, dir: bool| {
            if x == 0.0 {
                f64::NEG_INFINITY
            } else if x == 1.0 {
                0.0
            } else if x.is_infinite() {
                f64::INFINITY
            } else if dir {
                widen_up(x.ln(), LIBM_ULPS)
            } else {
                widen_down(x.ln(), LIBM_ULPS)
            }
        };
        Ok(Interval { lo: f(self.lo, false), hi: f(self.hi, true) })
    }

    /// `x^e` for a nonnegative base and a real exponent.
    pub fn powf(&self, e: f64) -> Result<Interval> {
        self.pow(Interval::point(e))
    }

    /// `x^e` for a nonnegative base interval and an exponent interval.
    ///
    /// For fixed `e` the map is monotone in `x`, and for fixed `x` monotone in
    /// `e`, so the range is the hull of the four corner values.
    pub fn pow(&self, e: Interval) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("pow of interval with negative part {self}")));
        }
        if e.is_point() && e.lo == e.lo.trunc() && e.lo.abs() <= 64.0 {
            let n = e.lo;
            if n >= 0.0 {
                return Ok(self.powi(n as u32));
            }
            let r = self.powi((-n) as u32);
            return Ok(Interval::ONE / r);
        }
        let corners = [
            pow_bounds(self.lo, e.lo),
            pow_bounds(self.lo, e.hi),
            pow_bounds(self.hi, e.lo),
            pow_bounds(self.hi, e.hi),
        ];
        let lo = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let hi = corners.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
        Ok(Interval { lo, hi })
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::Domain(format!("division by interval containing zero {self}")));
        }
        Ok(Interval::ONE / *self)
    }

    pub fn checked_div(&self, rhs: Interval) -> Result<Interval> {
        if rhs.contains_zero() {
            return Err(Error::Domain(format!("division by interval containing zero {rhs}")));
        }
        Ok(*self / rhs)
    }

    /// Shortest round-trip decimal strings for both endpoints.
    pub fn to_strings(&self) -> [String; 2] {
        [fmt_f64(self.lo), fmt_f64(self.hi)]
    }

    pub fn from_strs(lo: &str, hi: &str) -> Result<Interval> {
        let p = |s: &str| parse_f64(s).ok_or_else(|| Error::Parse(format!("bad interval endpoint {s:?}")));
        Interval::try_new(p(lo)?, p(hi)?)
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:?}")
    }
}

pub fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok().filter(|x: &f64| !x.is_nan()),
    }
}

fn sqrt_bounds(x: f64) -> (f64, f64) {
    if x == 0.0 || x.is_infinite() {
        return (x, x);
    }
    let r = x.sqrt();
    let res = (-r).mul_add(r, x);
    if res == 0.0 {
        (r, r)
    } else if res > 0.0 {
        (r, up(r))
    } else {
        (down(r), r)
    }
}

fn pos_powi(x: f64, n: u32) -> (f64, f64) {
    // binary powering on lower and upper bounds separately; x >= 0
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let (mut blo, mut bhi) = (x, x);
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            lo = mul_bounds(lo, blo).0;
            hi = mul_bounds(hi, bhi).1;
        }
        k >>= 1;
        if k > 0 {
            blo = mul_bounds(blo, blo).0;
            bhi = mul_bounds(bhi, bhi).1;
        }
    }
    (lo.max(0.0), hi)
}

fn pow_bounds(x: f64, e: f64) -> (f64, f64) {
    if x == 0.0 {
        return if e > 0.0 {
            (0.0, 0.0)
        } else if e == 0.0 {
            (1.0, 1.0)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
    }
    if x == 1.0 || e == 0.0 {
        return (1.0, 1.0);
    }
    if x.is_infinite() {
        return if e > 0.0 { (f64::INFINITY, f64::INFINITY) } else { (0.0, 0.0) };
    }
    let v = x.powf(e);
    (widen_down(v, LIBM_ULPS).max(0.0), widen_up(v, LIBM_ULPS))
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_f64(self.lo), fmt_f64(self.hi))
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_bounds(self.lo, rhs.lo).0, hi: add_bounds(self.hi, rhs.hi).1 }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let ps = [
            mul_bounds(self.lo, rhs.lo),
            mul_bounds(self.lo, rhs.hi),
            mul_bounds(self.hi, rhs.lo),
            mul_bounds(self.hi, rhs.hi),
        ];
        let lo = ps.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = ps.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Division by an interval containing zero yields the entire line.
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            if self.is_point() && self.lo == 0.0 && !rhs.is_point() {
                return Interval::ZERO;
            }
            return Interval::ENTIRE;
        }
        let qs = [
            div_bounds(self.lo, rhs.lo),
            div_bounds(self.lo, rhs.hi),
            div_bounds(self.hi, rhs.lo),
            div_bounds(self.hi, rhs.hi),
        ];
        let lo = qs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = qs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, rhs: f64) -> Interval { self.$m(Interval::point(rhs)) }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval { Interval::point(self).$m(rhs) }
        }
    )*};
}
scalar_ops!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[String; 2]>::deserialize(d)?;
        Interval::from_strs(&lo, &hi).map_err(serde::de::Error::custom)
    }
}

/// Horner evaluation of a power-basis polynomial with interval coefficients.
pub fn horner(coeffs: &[Interval], t: Interval) -> Interval {
    coeffs.iter().rev().fold(Interval::ZERO, |acc, &c| acc * t + c)
}

/// Coefficients of the derivative.
pub fn derivative(coeffs: &[Interval]) -> Vec<Interval> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// Taylor shift: coefficients of `p(m + s)` in powers of `s`.
pub fn taylor_shift(coeffs: &[Interval], m: Interval) -> Vec<Interval> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            c[j] = c[j] + m * c[j + 1];
        }
    }
    c
}

/// Range enclosure on one cell: Horner intersected with the centered form.
pub fn poly_range_cell(coeffs: &[Interval], t: Interval) -> Interval {
    let naive = horner(coeffs, t);
    if coeffs.len() <= 1 || t.is_point() {
        return naive;
    }
    let m = Interval::point(t.mid());
    let shifted = taylor_shift(coeffs, m);
    let centered = horner(&shifted, t - m);
    naive.intersect(&centered).unwrap_or(naive)
}

/// Range enclosure over `t`, bisected uniformly `depth` times.
pub fn poly_range(coeffs: &[Interval], t: Interval, depth: u32) -> Interval {
    if depth == 0 || t.is_point() {
        return poly_range_cell(coeffs, t);
    }
    let (a, b) = t.split();
    poly_range(coeffs, a, depth - 1).hull(&poly_range(coeffs, b, depth - 1))
}


impl num::Zero for Interval {
    fn zero() -> Self {
        Interval::ZERO
    }
    /// True only for the degenerate interval `[0, 0]`.
    fn is_zero(&self) -> bool {
        *self == Interval::ZERO
    }
}

impl num::One for Interval {
    fn one() -> Self {
        Interval::ONE
    }
}
