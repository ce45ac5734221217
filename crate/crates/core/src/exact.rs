//! Exact rationals and real quadratic surds `a + b·√r`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Tight rigorous enclosure of a rational.
pub fn rat_interval(q: &Rational) -> Interval {
    let f = q.to_f64().unwrap_or(f64::NAN);
    if !f.is_finite() {
        return if q.is_negative() { Interval::new(f64::NEG_INFINITY, f64::MIN) } else { Interval::new(f64::MAX, f64::INFINITY) };
    }
    let fq = BigRational::from_float(f).expect("finite float");
    match fq.cmp(q) {
        Ordering::Equal => Interval::point(f),
        Ordering::Less => Interval::new(f, f.next_up()),
        Ordering::Greater => Interval::new(f.next_down(), f),
    }
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn squarefree_part(n: u64) -> (u64, u64) {
    // n = k^2 * m with m squarefree
    let (mut k, mut m) = (1u64, 1u64);
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    (k, m * rest)
}

/// `a + b·√r` with `r` squarefree. Rationals use `b = 0, r = 1`.
///
/// Arithmetic between two irrational surds with different radicands panics;
/// values are only ever combined inside one quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    a: Rational,
    b: Rational,
    r: u64,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, r: u64) -> Self {
        assert!(r >= 1, "radicand must be positive");
        let (k, m) = squarefree_part(r);
        let b = b * rat_int(k as i64);
        if m == 1 {
            return Surd::rational(a + b);
        }
        Surd { a, b, r: m }.normalized()
    }

    pub fn rational(a: Rational) -> Self {
        Surd { a, b: Rational::zero(), r: 1 }
    }

    pub fn int(n: i64) -> Self {
        Surd::rational(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Surd::rational(rat(n, d))
    }

    /// `√n` for a nonnegative integer.
    pub fn sqrt_int(n: u64) -> Self {
        if n == 0 {
            return Surd::int(0);
        }
        Surd::new(Rational::zero(), Rational::one(), n)
    }

    /// `√(n/d)` for positive integers.
    pub fn sqrt_frac(n: u64, d: u64) -> Self {
        // √(n/d) = √(n d) / d
        Surd::new(Rational::zero(), rat(1, d as i64), n * d)
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.r = 1;
        }
        self
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.r
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn field(&self, other: &Surd) -> u64 {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.r,
            (_, true) => self.r,
            _ => {
                assert_eq!(self.r, other.r, "surds from different quadratic fields");
                self.r
            }
        }
    }

    pub fn conj(&self) -> Surd {
        Surd { a: self.a.clone(), b: -self.b.clone(), r: self.r }
    }

    /// Field norm `a² − r b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat_int(self.r as i64)
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // opposite signs: compare a² with r b²
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat_int(self.r as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn recip(&self) -> Result<Surd> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        let n = self.norm();
        Ok(Surd { a: &self.a / &n, b: -(&self.b / &n), r: self.r }.normalized())
    }

    pub fn pow(&self, k: u32) -> Surd {
        (0..k).fold(Surd::int(1), |acc, _| acc * self.clone())
    }

    pub fn to_interval(&self) -> Interval {
        let a = rat_interval(&self.a);
        if self.is_rational() {
            return a;
        }
        let s = Interval::point(self.r as f64).sqrt().expect("positive radicand");
        a + rat_interval(&self.b) * s
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return rat_to_f64(&self.a);
        }
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * (self.r as f64).sqrt()
    }

    /// Recognize a float as a rational or quadratic surd with small denominators.
    pub fn recognize(x: f64, tol: f64) -> Option<Surd> {
        if let Some(q) = recognize_rational(x, tol, 2000) {
            return Some(Surd::rational(q));
        }
        let mut best: Option<(i64, Surd)> = None;
        for r in [2u64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30] {
            let sr = (r as f64).sqrt();
            for den in 1..=48i64 {
                let bmax = (4 * den) as i64;
                for bn in -bmax..=bmax {
                    if bn == 0 {
                        continue;
                    }
                    let a = (x - bn as f64 / den as f64 * sr) * den as f64;
                    let an = a.round();
                    if (a - an).abs() <= tol * den as f64 {
                        let cost = den * 1000 + bn.abs();
                        if best.as_ref().map_or(true, |(c, _)| cost < *c) {
                            best = Some((cost, Surd::new(rat(an as i64, den), rat(bn, den), r)));
                        }
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        best.map(|(_, s)| s)
    }
}

fn sign(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Continued-fraction search for `p/q` with `q <= max_den` and `|x - p/q| <= tol`.
pub fn recognize_rational(x: f64, tol: f64, max_den: i64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            return None;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some(rat(h2, k2));
        }
        let frac = v - a;
        if frac == 0.0 {
            return None;
        }
        v = 1.0 / frac;
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    None
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).signum().cmp(&0)
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        let r = self.field(&rhs);
        Surd { a: self.a + rhs.a, b: self.b + rhs.b, r }.normalized()
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a, b: -self.b, r: self.r }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        let r = self.field(&rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * rat_int(r as i64);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Surd { a, b, r }.normalized()
    }
}

impl Div for Surd {
    type Output = Surd;
    /// Panics on division by zero; use [`Surd::recip`] for a checked version.
    fn div(self, rhs: Surd) -> Surd {
        self * rhs.recip().expect("division by zero surd")
    }
}

impl From<Rational> for Surd {
    fn from(q: Rational) -> Self {
        Surd::rational(q)
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let b = if self.b.is_one() {
            String::new()
        } else if (-self.b.clone()).is_one() {
            "-".into()
        } else {
            format!("{}*", fmt_rat(&self.b))
        };
        if self.a.is_zero() {
            write!(f, "{b}sqrt({})", self.r)
        } else {
            let sep = if b.starts_with('-') { "" } else { "+" };
            write!(f, "{}{sep}{b}sqrt({})", fmt_rat(&self.a), self.r)
        }
    }
}

fn parse_rat(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Accepts `a`, `b*sqrt(r)`, `a+b*sqrt(r)`, `a-sqrt(r)`, with rational `a`, `b`.
    fn from_str(s: &str) -> Result<Surd> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = t.find("sqrt(") else {
            return Ok(Surd::rational(parse_rat(&t)?));
        };
        let tail = &t[pos + 5..];
        let r: u64 = tail
            .strip_suffix(')')
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad radicand in {s:?}")))?;
        let prefix = t[..pos].strip_suffix('*').unwrap_or(&t[..pos]);
        let split = prefix.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
        let (a, bs) = match split {
            Some(i) => (parse_rat(&prefix[..i])?, &prefix[i..]),
            None => (Rational::zero(), prefix),
        };
        let b = match bs {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            x => parse_rat(x.strip_prefix('+').unwrap_or(x))?,
        };
        Ok(Surd::new(a, b, r))
    }
}

impl serde::Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Surd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}


/// Serde adapter writing a rational as `"n/d"`.
pub mod rat_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::int(0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::int(1)
    }
}

/// Solves `A x = b` over the rationals by Gaussian elimination.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Mismatch("linear system must be square".into()));
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Numerical("singular rational system".into()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
            let v = &f * &b[col];
            b[r] -= v;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}
