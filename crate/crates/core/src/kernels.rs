//! Potential functions of the cosine coordinate `t = τ(x, y)`.

use std::f64::consts::E;
use std::fmt;

use num::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, rat_interval, rat_to_f64, Rational, Surd};
use crate::interval::Interval;
use crate::jacobi::{gauss_jacobi, norm_sqr, project, JacobiBasis, JacobiExpansion};
use crate::polynomial::Poly;
use crate::spaces::{Field, Kind, SpaceDescriptor};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    /// `((1 + t)/2)^{p/2}`, i.e. `|⟨x, y⟩|^p` on projective spaces.
    PFrame { p: f64 },
    /// `|t|^p`; only meaningful on spheres.
    AbsPower { p: f64 },
    /// `max{0, 2τ²(1+t)(2 − τ²(1−t))}`, optionally divided by its value at `t = 1`.
    Causal {
        tau_sq: Surd,
        #[serde(default)]
        normalized: bool,
    },
    /// Power-basis polynomial.
    Poly { coeffs: Vec<Surd> },
    /// `Σ coeffs[m] C_m − beta_coeff · C_{k+1}` in the basis `C_n^{(α,β)}`.
    JacobiTruncation {
        #[serde(with = "crate::exact::rat_str")]
        alpha: Rational,
        #[serde(with = "crate::exact::rat_str")]
        beta: Rational,
        coeffs: Vec<Surd>,
        beta_coeff: Surd,
        k: usize,
    },
}

/// Degree of absolute monotonicity of a kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Degree(usize),
    /// Even `p`: the kernel is a polynomial and every high derivative vanishes.
    Polynomial,
}

impl Kernel {
    pub fn pframe(p: f64) -> Result<Kernel> {
        let k = Kernel::PFrame { p };
        k.validate()?;
        Ok(k)
    }

    pub fn causal(tau_sq: Surd) -> Result<Kernel> {
        let k = Kernel::Causal { tau_sq, normalized: false };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::PFrame { p } | Kernel::AbsPower { p } => {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(Error::InvalidParameter(format!("exponent p = {p} must be positive and finite")));
                }
            }
            Kernel::Causal { tau_sq, .. } => {
                if tau_sq.signum() <= 0 {
                    return Err(Error::InvalidParameter(format!("causal parameter tau^2 = {tau_sq} must be positive")));
                }
            }
            Kernel::Poly { coeffs } => check_radicands(coeffs)?,
            Kernel::JacobiTruncation { alpha, beta, coeffs, beta_coeff, .. } => {
                JacobiBasis::new(alpha, beta, 0)?;
                let mut all = coeffs.clone();
                all.push(beta_coeff.clone());
                check_radicands(&all)?;
            }
        }
        Ok(())
    }

    /// Rejects `|t|^p` on projective spaces.
    pub fn check_space(&self, space: &SpaceDescriptor) -> Result<()> {
        if let Kernel::AbsPower { .. } = self {
            if space.kind != Kind::Sphere {
                return Err(Error::Mismatch(format!(
                    "|t|^p is a sphere kernel; symmetrize and use pframe on the projective space instead of {space}"
                )));
            }
        }
        if let Kernel::JacobiTruncation { alpha, beta, .. } = self {
            if space.params() != (alpha.clone(), beta.clone()) {
                return Err(Error::Mismatch(format!("Jacobi parameters ({alpha}, {beta}) do not belong to {space}")));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.derivative(t, 0)
    }

    /// `f^{(k)}(t)` in floating point.
    pub fn derivative(&self, t: f64, k: usize) -> Result<f64> {
        check_t(t)?;
        match self {
            Kernel::PFrame { p } => pframe_derivative(*p, t, k),
            Kernel::AbsPower { p } => {
                if k > 0 && t == 0.0 && *p < k as f64 && ff(*p, k) != 0.0 {
                    return Err(Error::Domain(format!("|t|^{p} has a singular derivative of order {k} at 0")));
                }
                let s = if t < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                Ok(s * ff(*p, k) * t.abs().powf(*p - k as f64))
            }
            Kernel::Causal { tau_sq, normalized } => {
                let tau_sq = tau_sq.to_f64();
                let poly = causal_poly_f64(tau_sq);
                let kink = 1.0 - 2.0 / tau_sq;
                let v = if t > kink {
                    poly.nth_derivative(k).eval(&t)
                } else if t < kink || k == 0 {
                    0.0
                } else {
                    return Err(Error::Domain("the causal kernel is not differentiable at its kink".into()));
                };
                Ok(if *normalized { v / (8.0 * tau_sq) } else { v })
            }
            _ => {
                let poly = self.polynomial_interval().expect("polynomial kernel").mid();
                Ok(poly.nth_derivative(k).eval(&t))
            }
        }
    }

    /// Rigorous enclosure of `f^{(k)}` over `t ⊆ [−1, 1]`.
    pub fn derivative_interval(&self, t: Interval, k: usize) -> Result<Interval> {
        let t = clip_t(t)?;
        match self {
            Kernel::PFrame { p } => pframe_derivative_interval(Interval::point(*p), t, k),
            Kernel::AbsPower { p } => {
                let a = t.abs();
                let e = *p - k as f64;
                let c = ff_interval(Interval::point(*p), k);
                if c == Interval::ZERO {
                    return Ok(Interval::ZERO);
                }
                let mag = c * a.powf(e)?;
                Ok(if k % 2 == 0 || t.lo() >= 0.0 {
                    mag
                } else if t.hi() <= 0.0 {
                    -mag
                } else {
                    mag.hull(&-mag)
                })
            }
            Kernel::Causal { tau_sq, normalized } => {
                let kink = causal_kink(tau_sq).to_interval();
                let poly = causal_poly(tau_sq).to_interval().nth_derivative(k);
                let v = if t.lo() > kink.hi() {
                    poly.range(t)
                } else if t.hi() < kink.lo() {
                    Interval::ZERO
                } else if k == 0 {
                    // max(0, P) with P ≤ 0 left of the kink
                    poly.range(t).max(&Interval::ZERO)
                } else {
                    return Err(Error::Domain("the causal kernel is not differentiable at its kink".into()));
                };
                Ok(if *normalized { v / causal_value_at_one(tau_sq).to_interval() } else { v })
            }
            _ => Ok(self.polynomial_interval().expect("polynomial kernel").nth_derivative(k).range(t)),
        }
    }

    pub fn eval_interval(&self, t: Interval) -> Result<Interval> {
        self.derivative_interval(t, 0)
    }

    /// Power-basis coefficients when the kernel is a polynomial on `[−1, 1]`.
    pub fn polynomial_interval(&self) -> Option<Poly<Interval>> {
        match self {
            Kernel::Poly { coeffs } => Some(Poly::new(coeffs.iter().map(Surd::to_interval).collect())),
            Kernel::JacobiTruncation { .. } | Kernel::PFrame { .. } => self.exact_polynomial().map(|p| p.to_interval()),
            _ => None,
        }
    }

    /// Polynomial pieces `(domain, f|domain)` covering `[−1, 1]`, when the kernel is piecewise polynomial.
    /// Domains may overlap on an enclosure of a breakpoint.
    pub fn polynomial_pieces(&self) -> Option<Vec<(Interval, Poly<Interval>)>> {
        if let Some(p) = self.polynomial_interval() {
            return Some(vec![(Interval::new(-1.0, 1.0), p)]);
        }
        let Kernel::Causal { tau_sq, normalized } = self else { return None };
        let kink = causal_kink(tau_sq).to_interval();
        let mut poly = causal_poly(tau_sq).to_interval();
        if *normalized {
            poly = poly.scale(&(Interval::ONE / causal_value_at_one(tau_sq).to_interval()));
        }
        Some(vec![
            (Interval::new(-1.0, kink.hi().min(1.0)), Poly::new(vec![Interval::ZERO])),
            (Interval::new(kink.lo().max(-1.0), 1.0), poly),
        ])
    }

    /// Exact rational power form of polynomial kernels with rational data.
    pub fn exact_polynomial(&self) -> Option<Poly<Rational>> {
        match self {
            Kernel::PFrame { p } => {
                let k = even_half(*p)?;
                // ((1+t)/2)^k
                let base = Poly::new(vec![rat(1, 2), rat(1, 2)]);
                Some((0..k).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(&base)))
            }
            Kernel::Poly { coeffs } => Some(Poly::new(rational_parts(coeffs)?)),
            Kernel::JacobiTruncation { alpha, beta, coeffs, beta_coeff, k } => {
                let mut c = rational_parts(coeffs)?;
                let b = rational_parts(std::slice::from_ref(beta_coeff))?.pop()?;
                if c.len() < k + 2 {
                    c.resize(k + 2, Rational::zero());
                }
                c[k + 1] = &c[k + 1] - b;
                let basis = JacobiBasis::new(alpha, beta, c.len() - 1).ok()?;
                basis.to_power(&JacobiExpansion { alpha: alpha.clone(), beta: beta.clone(), coeffs: c }).ok()
            }
            _ => None,
        }
    }

    pub fn abs_monotonic_degree(&self) -> Result<Monotonicity> {
        match self {
            Kernel::PFrame { p } => abs_monotonic_degree(*p),
            Kernel::Poly { .. } | Kernel::JacobiTruncation { .. } => Ok(Monotonicity::Polynomial),
            _ => Err(Error::Unsupported(format!("absolute monotonicity is not tracked for {self}"))),
        }
    }

    /// Number of derivatives available in closed form at interior points.
    pub fn max_derivative(&self) -> usize {
        match self {
            Kernel::Causal { .. } => 0,
            _ => usize::MAX,
        }
    }

    /// Jacobi coefficients `f̂_0, …, f̂_degree` in `C_n^{(α,β)}`.
    pub fn jacobi_coefficients(&self, alpha: &Rational, beta: &Rational, degree: usize) -> Result<Vec<f64>> {
        if let Some(poly) = self.exact_polynomial() {
            let basis = JacobiBasis::new(alpha, beta, degree.max(poly.degree()))?;
            let e = basis.expand(&poly)?;
            return Ok((0..=degree).map(|n| rat_to_f64(&e.coeff(n))).collect());
        }
        if let Kernel::PFrame { p } = self {
            return pframe_expansion(*p, alpha, beta, degree);
        }
        if let Some(poly) = self.polynomial_interval() {
            let e = JacobiBasis::new(alpha, beta, degree.max(poly.degree()))?.expand(&poly)?;
            return Ok((0..=degree).map(|n| e.coeff(n).mid()).collect());
        }
        project(|t| self.eval(t).unwrap_or(f64::NAN), alpha, beta, degree, 400)
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::PFrame { p } => write!(f, "pframe(p={p})"),
            Kernel::AbsPower { p } => write!(f, "abs_power(p={p})"),
            Kernel::Causal { tau_sq, normalized } => {
                write!(f, "causal(tau^2={tau_sq}{})", if *normalized { ", normalized" } else { "" })
            }
            Kernel::Poly { coeffs } => write!(f, "poly(degree {})", coeffs.len().saturating_sub(1)),
            Kernel::JacobiTruncation { k, .. } => write!(f, "jacobi_truncation(k={k})"),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} lies outside [-1, 1]")));
    }
    Ok(())
}

fn clip_t(t: Interval) -> Result<Interval> {
    t.intersect(&Interval::new(-1.0, 1.0))
        .ok_or_else(|| Error::Domain(format!("t = {t} lies outside [-1, 1]")))
}

fn check_radicands(c: &[Surd]) -> Result<()> {
    let mut r = None;
    for s in c.iter().filter(|s| !s.is_rational()) {
        match r {
            None => r = Some(s.radicand()),
            Some(r0) if r0 != s.radicand() => {
                return Err(Error::InvalidParameter("coefficients mix different square roots".into()))
            }
            _ => {}
        }
    }
    Ok(())
}

fn rational_parts(c: &[Surd]) -> Option<Vec<Rational>> {
    c.iter().map(|s| s.is_rational().then(|| s.a().clone())).collect()
}

/// `k` when `p = 2k` exactly.
pub fn even_half(p: f64) -> Option<usize> {
    let h = p / 2.0;
    (h.fract() == 0.0 && h >= 0.0 && h < 1e6).then_some(h as usize)
}

/// Falling factorial `p(p − 1)⋯(p − k + 1)`.
fn ff(p: f64, k: usize) -> f64 {
    (0..k).map(|i| p - i as f64).product()
}

fn ff_interval(p: Interval, k: usize) -> Interval {
    (0..k).fold(Interval::ONE, |acc, i| acc * (p - Interval::point(i as f64)))
}

/// `(s)_k↓ = s(s−1)⋯(s−k+1)` and its derivative in `s`.
fn falling(s: Interval, k: usize) -> (Interval, Interval) {
    let mut v = Interval::ONE;
    let mut dv = Interval::ZERO;
    for i in 0..k {
        let f = s - Interval::point(i as f64);
        dv = dv * f + v;
        v = v * f;
    }
    (v, dv)
}

/// `f^{(k)}(t) = 2^{−k} (p/2)_k↓ ((1+t)/2)^{p/2−k}`.
pub fn pframe_derivative(p: f64, t: f64, k: usize) -> Result<f64> {
    check_t(t)?;
    let s = p / 2.0;
    let c: f64 = (0..k).map(|i| s - i as f64).product::<f64>() * 0.5f64.powi(k as i32);
    if c == 0.0 {
        return Ok(0.0);
    }
    let u = (1.0 + t) / 2.0;
    let e = s - k as f64;
    if u == 0.0 {
        return if e > 0.0 {
            Ok(0.0)
        } else if e == 0.0 {
            Ok(c)
        } else {
            Err(Error::Domain(format!("derivative of order {k} of the p = {p} kernel is singular at t = -1")))
        };
    }
    Ok(c * u.powf(e))
}

fn u_of(t: Interval) -> Interval {
    let u = (Interval::ONE + t) * Interval::point(0.5);
    Interval::new(u.lo().max(0.0), u.hi().max(0.0))
}

/// Enclosure of `f^{(k)}` for an interval of exponents `p` and of arguments `t`.
pub fn pframe_derivative_interval(p: Interval, t: Interval, k: usize) -> Result<Interval> {
    let t = clip_t(t)?;
    let s = p * Interval::point(0.5);
    let (c, _) = falling(s, k);
    if c == Interval::ZERO {
        return Ok(Interval::ZERO);
    }
    let c = c * Interval::point(0.5f64.powi(k as i32));
    let e = s - Interval::point(k as f64);
    Ok(c * u_of(t).pow(e)?)
}

/// Enclosure of `∂_p f^{(k)}(t)` over intervals of `p` and `t`.
pub fn pframe_dp_derivative_interval(p: Interval, t: Interval, k: usize) -> Result<Interval> {
    let t = clip_t(t)?;
    let s = p * Interval::point(0.5);
    let (c, dc) = falling(s, k);
    let scale = Interval::point(0.5f64.powi(k as i32));
    let e = s - Interval::point(k as f64);
    let u = u_of(t);
    // d/dp [c(s) u^e] = (c'(s) u^e + c(s) u^e ln u) / 2
    let first = if dc == Interval::ZERO { Interval::ZERO } else { dc * u.pow(e)? };
    let second = if c == Interval::ZERO { Interval::ZERO } else { c * pow_log(u, e)? };
    Ok(scale * (first + second) * Interval::point(0.5))
}

/// Enclosure of `u^e ln u` for `u ≥ 0`, `e > 0`, with the value 0 at `u = 0`.
pub fn pow_log(u: Interval, e: Interval) -> Result<Interval> {
    if !(e.lo() > 0.0) {
        return Err(Error::Domain(format!("u^e ln u needs e > 0, got {e}")));
    }
    if u.lo() > 0.0 {
        return Ok(u.pow(e)? * u.ln()?);
    }
    let b = u.hi();
    if b == 0.0 {
        return Ok(Interval::ZERO);
    }
    let lb = Interval::point(b).ln()?;
    let e1 = Interval::point(e.lo());
    // φ_e(u) = u^e ln u decreases on (0, exp(−1/e)); exp(−1/e) grows with e
    if (lb * e1).hi() <= -1.0 {
        let v = Interval::point(b).pow(e1)? * lb;
        return Ok(Interval::new(v.lo(), 0.0));
    }
    let floor = -(Interval::ONE / (e1 * Interval::point(E).hull(&Interval::point(E.next_up()))));
    let top = if b > 1.0 { (Interval::point(b).pow(Interval::point(e.hi()))? * lb).hi() } else { 0.0 };
    Ok(Interval::new(floor.lo(), top))
}

pub fn abs_monotonic_degree(p: f64) -> Result<Monotonicity> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidParameter(format!("exponent p = {p} must be positive")));
    }
    if even_half(p).is_some() {
        return Ok(Monotonicity::Polynomial);
    }
    Ok(Monotonicity::Degree((p / 2.0).ceil() as usize))
}

/// `∫ ((1+t)/2)^{p/2} dν^{(α,β)} = B(α+1, β+p/2+1) / B(α+1, β+1)`.
pub fn pframe_mean(p: f64, alpha: f64, beta: f64) -> f64 {
    let s = p / 2.0;
    let lb = |a: f64, b: f64| ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    (lb(alpha + 1.0, beta + s + 1.0) - lb(alpha + 1.0, beta + 1.0)).exp()
}

/// Jacobi coefficients of the p-frame kernel. The factor `u^{p/2}` is absorbed
/// into the weight, so Gauss–Jacobi at `(α, β + p/2)` integrates exactly.
pub fn pframe_expansion(p: f64, alpha: &Rational, beta: &Rational, degree: usize) -> Result<Vec<f64>> {
    let (a, b) = (rat_to_f64(alpha), rat_to_f64(beta));
    let s = p / 2.0;
    let n = degree / 2 + 2;
    let (x, w) = gauss_jacobi(a, b + s, n)?;
    let ratio = pframe_mean(p, a, b);
    let mut acc = vec![0.0; degree + 1];
    for (xi, wi) in x.iter().zip(&w) {
        for (k, c) in crate::jacobi::jacobi_eval_all(a, b, degree, *xi).into_iter().enumerate() {
            acc[k] += wi * c;
        }
    }
    (0..=degree).map(|k| Ok(ratio * acc[k] / norm_sqr(alpha, beta, k)?.to_f64().unwrap_or(f64::NAN))).collect()
}

/// Minimal `p = 2k` energy `c_F(d, k)` over probability measures on `FP^{d−1}`.
pub fn even_p_minimum(field: Field, d: usize, k: usize) -> Result<Rational> {
    if k < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!("need k >= 1 and d >= 2, got k = {k}, d = {d}")));
    }
    let (d, k) = (d as i64, k as i64);
    let binom = |n: i64, k: i64| (0..k).fold(Rational::one(), |acc, i| acc * rat(n - i, i + 1));
    Ok(match field {
        Field::R => (0..k).fold(Rational::one(), |acc, i| acc * rat(2 * i + 1, d + 2 * i)),
        Field::C => binom(d + k - 1, k).recip(),
        Field::H => rat_int(k + 1) / binom(2 * d + k - 1, k),
    })
}

/// The p = 3 energy of a SIC-POVM in `ℂ^d`: `(1 + (d²−1)(d+1)^{−3/2}) / d²`.
pub fn sic_energy(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("SIC energy needs d >= 2, got {d}")));
    }
    let d = d as f64;
    Ok((1.0 + (d * d - 1.0) * (d + 1.0).powf(-1.5)) / (d * d))
}

/// Polynomial part `P(t) = 2τ²(1+t)(2 − τ²(1−t))` of the causal kernel.
pub fn causal_poly(tau_sq: &Surd) -> Poly<Surd> {
    let two = Surd::int(2);
    let c0 = two.clone() * tau_sq.clone() * (two.clone() - tau_sq.clone());
    let c1 = Surd::int(4) * tau_sq.clone();
    let c2 = two * tau_sq.clone() * tau_sq.clone();
    Poly::new(vec![c0, c1, c2])
}

fn causal_poly_f64(tau_sq: f64) -> Poly<f64> {
    Poly::new(vec![2.0 * tau_sq * (2.0 - tau_sq), 4.0 * tau_sq, 2.0 * tau_sq * tau_sq])
}

/// Interior zero `1 − 2/τ²` of the causal polynomial.
pub fn causal_kink(tau_sq: &Surd) -> Surd {
    Surd::int(1) - Surd::int(2) * tau_sq.recip().expect("positive tau^2")
}

/// `L(1) = 8τ²`.
pub fn causal_value_at_one(tau_sq: &Surd) -> Surd {
    Surd::int(8) * tau_sq.clone()
}

/// Exact value of `((1+t)/2)^{p/2}` at rational `t` for even `p`.
pub fn pframe_exact(p: f64, t: &Rational) -> Option<Rational> {
    let k = even_half(p)?;
    let u = (Rational::one() + t) / rat_int(2);
    Some(num::pow::pow(u, k))
}

/// Enclosure of `f(t)` for a rational argument.
pub fn eval_at_rational(kernel: &Kernel, t: &Rational, k: usize) -> Result<Interval> {
    kernel.derivative_interval(rat_interval(t), k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::SpaceDescriptor;

    #[test]
    fn pframe_values() {
        let k = Kernel::pframe(3.0).unwrap();
        assert_eq!(k.eval(1.0).unwrap(), 1.0);
        assert_eq!(k.eval(-1.0).unwrap(), 0.0);
        let k4 = Kernel::pframe(4.0).unwrap();
        for i in 0..20 {
            let t = -1.0 + 2.0 * i as f64 / 19.0;
            let u: f64 = (1.0 + t) / 2.0;
            assert!((k4.eval(t).unwrap() - u * u).abs() < 1e-15);
        }
        assert!(k.derivative(-1.0, 2).is_err());
        assert_eq!(k4.derivative(-1.0, 5).unwrap(), 0.0);
        assert!(Kernel::pframe(-1.0).is_err());
        assert!(k.eval(1.5).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for p in [1.0, 3.0, 5.0, 9.0] {
            let kern = Kernel::pframe(p).unwrap();
            for k in 0..5 {
                for i in 0..20 {
                    let t = -0.9 + 1.8 * i as f64 / 19.0;
                    let h = 1e-5;
                    let fd = (kern.derivative(t + h, k).unwrap() - kern.derivative(t - h, k).unwrap()) / (2.0 * h);
                    let an = kern.derivative(t, k + 1).unwrap();
                    assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3), "p={p} k={k} t={t}: {fd} vs {an}");
                    let enc = kern.derivative_interval(Interval::point(t), k + 1).unwrap();
                    assert!(enc.contains(an) && enc.width() <= 1e-13 * an.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn monotonicity_degree() {
        assert_eq!(abs_monotonic_degree(3.0).unwrap(), Monotonicity::Degree(2));
        assert_eq!(abs_monotonic_degree(9.0).unwrap(), Monotonicity::Degree(5));
        assert_eq!(abs_monotonic_degree(6.0).unwrap(), Monotonicity::Polynomial);
        for t in 2..7 {
            for p in [2.0 * t as f64 - 1.9, 2.0 * t as f64 - 1.0, 2.0 * t as f64 - 0.01] {
                let Monotonicity::Degree(m) = abs_monotonic_degree(p).unwrap() else { panic!() };
                assert_eq!(m, t);
                // derivatives up to M are ≥ 0 and the next one is ≤ 0
                for x in [-0.9, 0.0, 0.7] {
                    for k in 0..=m {
                        assert!(pframe_derivative(p, x, k).unwrap() >= 0.0);
                    }
                    assert!(pframe_derivative(p, x, m + 1).unwrap() <= 0.0);
                }
            }
        }
    }

    #[test]
    fn causal_examples() {
        let k = Kernel::causal(Surd::int(2)).unwrap();
        for i in 0..41 {
            let t = -1.0 + i as f64 / 20.0;
            let v: f64 = 8.0 * t * t + 8.0 * t;
            assert!((k.eval(t).unwrap() - v.max(0.0)).abs() < 1e-13);
            assert!(k.eval_interval(Interval::point(t)).unwrap().contains(v.max(0.0)));
        }
        assert!(k.derivative(0.5, 1).is_ok());
        assert!(k.derivative_interval(Interval::new(-0.1, 0.1), 1).is_err());
        let tau_sq: Surd = "5/2+1/2*sqrt(5)".parse().unwrap();
        assert_eq!(causal_kink(&tau_sq), Surd::sqrt_frac(1, 5));
        assert_eq!(causal_poly(&tau_sq).eval(&causal_kink(&tau_sq)), Surd::int(0));
        let n = Kernel::Causal { tau_sq, normalized: true };
        assert!((n.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(n.eval_interval(Interval::ONE).unwrap().contains(1.0));
    }

    #[test]
    fn even_p_minima() {
        assert_eq!(even_p_minimum(Field::R, 3, 1).unwrap(), rat(1, 3));
        assert_eq!(even_p_minimum(Field::R, 3, 3).unwrap(), rat(1, 7));
        assert_eq!(even_p_minimum(Field::C, 4, 2).unwrap(), rat(1, 10));
        for (field, d) in [(Field::R, 3), (Field::R, 5), (Field::C, 3), (Field::C, 5), (Field::H, 2), (Field::H, 3)] {
            let space = SpaceDescriptor::projective(field, d).unwrap();
            let (a, b) = space.params();
            for k in 1..=4 {
                let kern = Kernel::pframe(2.0 * k as f64).unwrap();
                let coeffs = kern.jacobi_coefficients(&a, &b, 2 * k).unwrap();
                let exact = rat_to_f64(&even_p_minimum(field, d, k).unwrap());
                assert!((coeffs[0] - exact).abs() < 1e-12);
                assert!((pframe_mean(2.0 * k as f64, rat_to_f64(&a), rat_to_f64(&b)) - exact).abs() < 1e-12);
                assert!(coeffs.iter().all(|&c| c > -1e-14));
                // the quadrature path agrees with the exact expansion
                let quad = pframe_expansion(2.0 * k as f64, &a, &b, 2 * k).unwrap();
                for (x, y) in quad.iter().zip(&coeffs) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
        assert!("op:3".parse::<SpaceDescriptor>().is_err());
    }

    #[test]
    fn odd_p_expansions_have_negative_coefficients() {
        for (field, d) in [(Field::R, 3), (Field::R, 4), (Field::C, 3), (Field::H, 3)] {
            let (a, b) = SpaceDescriptor::projective(field, d).unwrap().params();
            for p in [1.0, 3.0, 5.0, 2.5] {
                let m = (p / 2.0f64).ceil() as usize;
                let c = pframe_expansion(p, &a, &b, m + 3).unwrap();
                assert!(c.iter().any(|&x| x < 0.0), "{field} d={d} p={p}: {c:?}");
            }
        }
    }

    #[test]
    fn sic_values() {
        assert!((sic_energy(3).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((sic_energy(4).unwrap() - 0.146352549156242).abs() < 1e-14);
        assert!((sic_energy(2).unwrap() - (1.0 + 3.0 * 3f64.powf(-1.5)) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn interval_p_enclosures() {
        let p = Interval::new(8.5, 8.75);
        for t in [-1.0, -0.99, -0.5, 0.0, 0.3, 1.0] {
            for k in 0..4 {
                let enc = pframe_derivative_interval(p, Interval::point(t), k).unwrap();
                let denc = pframe_dp_derivative_interval(p, Interval::point(t), k).unwrap();
                for i in 0..=10 {
                    let pp = 8.5 + 0.025 * i as f64;
                    assert!(enc.contains(pframe_derivative(pp, t, k).unwrap()));
                    let h = 1e-6;
                    let fd = (pframe_derivative(pp + h, t, k).unwrap() - pframe_derivative(pp - h, t, k).unwrap()) / (2.0 * h);
                    let mid = Interval::point(pp);
                    let dp = pframe_dp_derivative_interval(mid, Interval::point(t), k).unwrap();
                    assert!((dp.mid() - fd).abs() < 1e-6 * fd.abs().max(1.0), "t={t} k={k}: {dp} vs {fd}");
                    assert!(denc.lo() <= dp.hi() && dp.lo() <= denc.hi() + 1e-12 * dp.mag());
                }
            }
        }
        for (lo, hi) in [(0.0, 1e-3), (0.0, 0.5), (0.0, 0.999), (0.2, 0.3)] {
            let enc = pow_log(Interval::new(lo, hi), Interval::new(3.0, 4.5)).unwrap();
            for i in 0..=50 {
                let u = lo + (hi - lo) * i as f64 / 50.0;
                for e in [3.0, 3.7, 4.5] {
                    let v = if u == 0.0 { 0.0 } else { u.powf(e) * u.ln() };
                    assert!(enc.contains(v), "{u} {e} {v} {enc}");
                }
            }
        }
    }

    #[test]
    fn space_compatibility() {
        let rp = SpaceDescriptor::projective(Field::R, 3).unwrap();
        let s = SpaceDescriptor::sphere(Field::R, 3).unwrap();
        let a = Kernel::AbsPower { p: 3.0 };
        assert!(a.check_space(&rp).is_err());
        assert!(a.check_space(&s).is_ok());
        assert!((a.eval(-0.5).unwrap() - 0.125).abs() < 1e-15);
        assert!(Kernel::pframe(3.0).unwrap().check_space(&rp).is_ok());
    }

    #[test]
    fn serde_round_trip() {
        let ks = vec![
            Kernel::pframe(2.5).unwrap(),
            Kernel::Causal { tau_sq: "5/2+1/2*sqrt(5)".parse().unwrap(), normalized: true },
            Kernel::Poly { coeffs: vec![Surd::frac(1, 3), Surd::int(0), Surd::int(2)] },
        ];
        for k in ks {
            let s = serde_json::to_string(&k).unwrap();
            let back: Kernel = serde_json::from_str(&s).unwrap();
            assert_eq!(back, k);
        }
    }
}
