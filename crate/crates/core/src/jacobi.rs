//! Jacobi polynomials `C_n^{(α,β)}` normalized by `C_n(1) = 1`, their monic
//! versions `Q_n`, basis conversion, Gauss–Jacobi quadrature and sign tests.
//!
//! The measure `dν^{(α,β)} ∝ (1−t)^α (1+t)^β dt` on `[−1, 1]` is normalized to
//! total mass one throughout.

use nalgebra::{DMatrix, SymmetricEigen};
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat_int, Rational};
use crate::interval::Interval;
use crate::polynomial::{Poly, Scalar};

fn check_params(alpha: &Rational, beta: &Rational) -> Result<()> {
    let m1 = -Rational::one();
    if *alpha <= m1 || *beta <= m1 {
        return Err(Error::InvalidParameter(format!("Jacobi parameters ({alpha}, {beta}) must exceed -1")));
    }
    Ok(())
}

fn check_params_f64(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::InvalidParameter(format!("Jacobi parameters ({alpha}, {beta}) must exceed -1")));
    }
    Ok(())
}

/// Monic three-term recurrence `Q_{n+1} = (t − a_n) Q_n − b_n Q_{n−1}`.
/// Returns `(a_n, b_n)`; `b_0` is reported as 0.
pub fn recurrence(alpha: &Rational, beta: &Rational, n: usize) -> (Rational, Rational) {
    let one = Rational::one();
    let two = rat_int(2);
    let s = alpha + beta;
    let nn = rat_int(n as i64);
    let a = if n == 0 {
        (beta - alpha) / (&s + &two)
    } else {
        let u = &two * &nn + &s;
        (beta * beta - alpha * alpha) / (&u * (&u + &two))
    };
    let b = match n {
        0 => Rational::zero(),
        1 => {
            let u = &s + &two;
            rat_int(4) * (&one + alpha) * (&one + beta) / (&u * &u * (&u + &one))
        }
        _ => {
            let u = &two * &nn + &s;
            rat_int(4) * &nn * (&nn + alpha) * (&nn + beta) * (&nn + &s) / (&u * &u * (&u + &one) * (&u - &one))
        }
    };
    (a, b)
}

fn recurrence_f64(alpha: f64, beta: f64, n: usize) -> (f64, f64) {
    let s = alpha + beta;
    let nf = n as f64;
    let a = if n == 0 {
        (beta - alpha) / (s + 2.0)
    } else {
        let u = 2.0 * nf + s;
        (beta - alpha) * (beta + alpha) / (u * (u + 2.0))
    };
    let b = match n {
        0 => 0.0,
        1 => {
            let u = s + 2.0;
            4.0 * (1.0 + alpha) * (1.0 + beta) / (u * u * (u + 1.0))
        }
        _ => {
            let u = 2.0 * nf + s;
            4.0 * nf * (nf + alpha) * (nf + beta) * (nf + s) / (u * u * (u + 1.0) * (u - 1.0))
        }
    };
    (a, b)
}

/// Power-basis coefficients of the monic `Q_n^{(α,β)}`.
pub fn jacobi_monic(alpha: &Rational, beta: &Rational, n: usize) -> Result<Poly<Rational>> {
    check_params(alpha, beta)?;
    let mut prev = Poly::zero();
    let mut cur = Poly::constant(Rational::one());
    for k in 0..n {
        let (a, b) = recurrence(alpha, beta, k);
        let next = cur.mul(&Poly::linear_root(a)).sub(&prev.scale(&b));
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `C_n` normalized to 1 at `t = 1`.
pub fn jacobi_normalized(alpha: &Rational, beta: &Rational, n: usize) -> Result<Poly<Rational>> {
    let q = jacobi_monic(alpha, beta, n)?;
    let v = q.eval(&Rational::one());
    Ok(q.scale(&v.recip()))
}

/// `∫ C_n² dν`, which is `1/dim V_n` on the corresponding space.
pub fn norm_sqr(alpha: &Rational, beta: &Rational, n: usize) -> Result<Rational> {
    let q = jacobi_monic(alpha, beta, n)?;
    let v = q.eval(&Rational::one());
    let prod = (1..=n).fold(Rational::one(), |acc, k| acc * recurrence(alpha, beta, k).1);
    Ok(prod / (&v * &v))
}

/// Value of `C_n^{(α,β)}(t)` by the normalized three-term recurrence.
pub fn jacobi_eval(alpha: f64, beta: f64, n: usize, t: f64) -> Result<f64> {
    check_params_f64(alpha, beta)?;
    Ok(jacobi_eval_all(alpha, beta, n, t)[n])
}

/// `[C_0(t), …, C_n(t)]`.
pub fn jacobi_eval_all(alpha: f64, beta: f64, n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    // rho_k = Q_{k+1}(1) / Q_k(1)
    let mut rho_prev = 1.0;
    for k in 0..n {
        let (a, b) = recurrence_f64(alpha, beta, k);
        let rho = (1.0 - a) - if k == 0 { 0.0 } else { b / rho_prev };
        let back = if k == 0 { 0.0 } else { b / rho_prev * out[k - 1] };
        out.push(((t - a) * out[k] - back) / rho);
        rho_prev = rho;
    }
    out
}

/// Cached exact normalized polynomials `C_0, …, C_n` for one parameter pair.
#[derive(Clone, Debug)]
pub struct JacobiBasis {
    alpha: Rational,
    beta: Rational,
    polys: Vec<Poly<Rational>>,
}

impl JacobiBasis {
    pub fn new(alpha: &Rational, beta: &Rational, max_degree: usize) -> Result<Self> {
        check_params(alpha, beta)?;
        let one = Rational::one();
        let mut monic = vec![Poly::constant(one.clone())];
        let mut prev = Poly::zero();
        for k in 0..max_degree {
            let (a, b) = recurrence(alpha, beta, k);
            let next = monic[k].mul(&Poly::linear_root(a)).sub(&prev.scale(&b));
            prev = monic[k].clone();
            monic.push(next);
        }
        let polys = monic
            .into_iter()
            .map(|q| {
                let v = q.eval(&one);
                q.scale(&v.recip())
            })
            .collect();
        Ok(JacobiBasis { alpha: alpha.clone(), beta: beta.clone(), polys })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, n: usize) -> &Poly<Rational> {
        &self.polys[n]
    }

    /// Exact triangular change of basis from power coefficients.
    pub fn expand<T: Scalar>(&self, p: &Poly<T>) -> Result<JacobiExpansion<T>> {
        if p.degree() > self.max_degree() {
            return Err(Error::InvalidParameter(format!(
                "degree {} exceeds the cached basis degree {}",
                p.degree(),
                self.max_degree()
            )));
        }
        let mut rest = p.c.clone();
        let mut coeffs = vec![T::zero(); rest.len()];
        for n in (0..rest.len()).rev() {
            let basis = &self.polys[n];
            let lead = T::from_rational(&basis.c[n]);
            let cn = rest[n].clone() / lead;
            for (k, b) in basis.c.iter().enumerate().take(n) {
                rest[k] = rest[k].clone() - cn.clone() * T::from_rational(b);
            }
            rest[n] = T::zero();
            coeffs[n] = cn;
        }
        Ok(JacobiExpansion { alpha: self.alpha.clone(), beta: self.beta.clone(), coeffs })
    }

    pub fn to_power<T: Scalar>(&self, e: &JacobiExpansion<T>) -> Result<Poly<T>> {
        if e.coeffs.len() > self.polys.len() {
            return Err(Error::InvalidParameter("expansion longer than the cached basis".into()));
        }
        let mut out = vec![T::zero(); e.coeffs.len()];
        for (n, cn) in e.coeffs.iter().enumerate() {
            for (k, b) in self.polys[n].c.iter().enumerate() {
                out[k] = out[k].clone() + cn.clone() * T::from_rational(b);
            }
        }
        Ok(Poly::new(out))
    }
}

/// `Σ coeffs[n] · C_n^{(α,β)}(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiExpansion<T> {
    #[serde(with = "crate::exact::rat_str")]
    pub alpha: Rational,
    #[serde(with = "crate::exact::rat_str")]
    pub beta: Rational,
    pub coeffs: Vec<T>,
}

impl<T: Scalar> JacobiExpansion<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn to_power(&self) -> Result<Poly<T>> {
        JacobiBasis::new(&self.alpha, &self.beta, self.degree())?.to_power(self)
    }
}

impl JacobiExpansion<f64> {
    pub fn eval(&self, t: f64) -> f64 {
        let (a, b) = (self.alpha.to_f64().unwrap_or(f64::NAN), self.beta.to_f64().unwrap_or(f64::NAN));
        let c = jacobi_eval_all(a, b, self.degree(), t);
        self.coeffs.iter().zip(c).map(|(x, y)| x * y).sum()
    }
}

impl JacobiExpansion<Rational> {
    pub fn to_interval(&self) -> JacobiExpansion<Interval> {
        JacobiExpansion {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            coeffs: self.coeffs.iter().map(crate::exact::rat_interval).collect(),
        }
    }
}

/// Expands a power-basis polynomial in `C_n^{(α,β)}`.
pub fn expand<T: Scalar>(p: &Poly<T>, alpha: &Rational, beta: &Rational) -> Result<JacobiExpansion<T>> {
    JacobiBasis::new(alpha, beta, p.degree())?.expand(p)
}

/// Gauss–Jacobi rule for the normalized `dν^{(α,β)}` by Golub–Welsch.
pub fn gauss_jacobi(alpha: f64, beta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_params_f64(alpha, beta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("quadrature needs at least one node".into()));
    }
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let (a, _) = recurrence_f64(alpha, beta, k);
        j[(k, k)] = a;
        if k + 1 < n {
            let (_, b) = recurrence_f64(alpha, beta, k + 1);
            let s = b.sqrt();
            j[(k, k + 1)] = s;
            j[(k + 1, k)] = s;
        }
    }
    let eig = SymmetricEigen::try_new(j, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Golub-Welsch eigenvalue iteration did not converge".into()))?;
    let mut pairs: Vec<(f64, f64)> =
        (0..n).map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2))).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    Ok(pairs.into_iter().map(|(x, w)| (x.clamp(-1.0, 1.0), w / total)).unzip())
}

/// Jacobi coefficients of an arbitrary function by an `n`-point Gauss rule.
pub fn project(f: impl Fn(f64) -> f64, alpha: &Rational, beta: &Rational, degree: usize, n: usize) -> Result<Vec<f64>> {
    let (a, b) = (alpha.to_f64().unwrap_or(f64::NAN), beta.to_f64().unwrap_or(f64::NAN));
    let (x, w) = gauss_jacobi(a, b, n)?;
    let mut acc = vec![0.0; degree + 1];
    for (xi, wi) in x.iter().zip(&w) {
        let fx = f(*xi) * wi;
        for (k, c) in jacobi_eval_all(a, b, degree, *xi).into_iter().enumerate() {
            acc[k] += fx * c;
        }
    }
    (0..=degree).map(|k| Ok(acc[k] / norm_sqr(alpha, beta, k)?.to_f64().unwrap_or(f64::NAN))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Yes,
    No,
    Marginal,
}

pub const DEFAULT_PD_TOL: f64 = 1e-10;

/// Sign test on expansion coefficients. The zero expansion is positive definite.
pub fn is_positive_definite(e: &JacobiExpansion<f64>, tol: f64) -> Definiteness {
    if e.coeffs.iter().any(|&c| c <= -tol || c.is_nan()) {
        Definiteness::No
    } else if e.coeffs.iter().any(|&c| c < 0.0) {
        Definiteness::Marginal
    } else {
        Definiteness::Yes
    }
}

/// Rigorous sign test on interval coefficients from index `from` on.
pub fn interval_nonneg(e: &JacobiExpansion<Interval>, from: usize) -> bool {
    e.coeffs.iter().skip(from).all(|c| c.is_nonneg())
}

/// Exact sign test on rational coefficients.
pub fn rational_nonneg(e: &JacobiExpansion<Rational>) -> bool {
    e.coeffs.iter().all(|c| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::spaces::{Field, Kind, SpaceDescriptor, UnitVector};
    use num::BigInt;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exact moments `∫ t^k dν` from `∫ u^j dν = Π_{i<j} (β+1+i)/(α+β+2+i)`, `u = (1+t)/2`.
    fn moments(alpha: &Rational, beta: &Rational, kmax: usize) -> Vec<Rational> {
        let one = Rational::one();
        let mut mu = vec![one.clone()];
        for i in 0..kmax {
            let i = rat_int(i as i64);
            let next = mu.last().unwrap() * (beta + &one + &i) / (alpha + beta + rat_int(2) + &i);
            mu.push(next);
        }
        // t^k = (2u − 1)^k
        (0..=kmax)
            .map(|k| {
                (0..=k).fold(Rational::zero(), |acc, j| {
                    let binom = num::integer::binomial(BigInt::from(k), BigInt::from(j));
                    let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                    acc + Rational::from_integer(binom * sign) * Rational::from_integer(BigInt::from(2).pow(j as u32)) * &mu[j]
                })
            })
            .collect()
    }

    fn integrate(p: &Poly<Rational>, m: &[Rational]) -> Rational {
        p.c.iter().enumerate().fold(Rational::zero(), |acc, (k, c)| acc + c * &m[k])
    }

    /// Gram–Schmidt on monomials, normalized at 1.
    fn gram_schmidt(alpha: &Rational, beta: &Rational, n: usize) -> Vec<Poly<Rational>> {
        let m = moments(alpha, beta, 2 * n + 2);
        let mut out: Vec<Poly<Rational>> = Vec::new();
        for k in 0..=n {
            let mut c = vec![Rational::zero(); k + 1];
            c[k] = Rational::one();
            let mut p = Poly::new(c);
            for q in &out {
                let proj = integrate(&p.mul(q), &m) / integrate(&q.mul(q), &m);
                p = p.sub(&q.scale(&proj));
            }
            out.push(p);
        }
        out.into_iter().map(|p| { let v = p.eval(&Rational::one()); p.scale(&v.recip()) }).collect()
    }

    fn catalog_params() -> Vec<(Rational, Rational)> {
        let mut v = Vec::new();
        for d in 3..=8 {
            v.push(SpaceDescriptor::projective(Field::R, d).unwrap().params());
            v.push(SpaceDescriptor::sphere(Field::R, d).unwrap().params());
        }
        for d in 2..=5 {
            v.push(SpaceDescriptor::projective(Field::C, d).unwrap().params());
            v.push(SpaceDescriptor::projective(Field::H, d).unwrap().params());
        }
        v.push(SpaceDescriptor::sphere(Field::R, 2).unwrap().params());
        v
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(jacobi_eval(0.3, -0.2, 0, 0.7).unwrap(), 1.0);
        assert!((jacobi_eval(0.0, 0.0, 1, 0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!(jacobi_eval(-1.0, 0.0, 1, 0.5).is_err());
        let (a, b) = (rat(3, 2), rat(-1, 2));
        let c1 = jacobi_normalized(&a, &b, 1).unwrap();
        // (α−β)/(2(α+1)) + (α+β+2)/(2(α+1)) t
        assert_eq!(c1.c, vec![rat(2, 5), rat(3, 5)]);
        for n in 0..12 {
            assert!((jacobi_eval(0.7, 1.3, n, 1.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_gram_schmidt_oracle() {
        for (a, b) in [(rat(1, 2), rat(-1, 2)), (rat(0, 1), rat(-1, 2)), (rat(2, 1), rat(0, 1)), (rat(-1, 2), rat(-1, 2))] {
            let gs = gram_schmidt(&a, &b, 6);
            for (n, g) in gs.iter().enumerate() {
                assert_eq!(&jacobi_normalized(&a, &b, n).unwrap(), g, "n = {n} at ({a}, {b})");
                let x = jacobi_eval(rat_to(&a), rat_to(&b), n, 0.0).unwrap();
                assert!((x - g.eval(&Rational::zero()).to_f64().unwrap()).abs() < 1e-13);
            }
        }
    }

    fn rat_to(q: &Rational) -> f64 {
        q.to_f64().unwrap()
    }

    #[test]
    fn monic_families() {
        assert_eq!(jacobi_monic(&rat(1, 3), &rat(1, 5), 0).unwrap().c, vec![rat(1, 1)]);
        assert_eq!(jacobi_monic(&rat(0, 1), &rat(0, 1), 1).unwrap().c, vec![rat(0, 1), rat(1, 1)]);
        let q = jacobi_monic(&rat(1, 2), &rat(1, 2), 7).unwrap();
        assert_eq!(q.c.last().unwrap(), &rat(1, 1));
    }

    #[test]
    fn expansion_examples() {
        let (a, b) = (rat(5, 2), rat(1, 3));
        let e = expand(&Poly::constant(rat(7, 3)), &a, &b).unwrap();
        assert_eq!(e.coeffs, vec![rat(7, 3)]);
        let e = expand(&Poly::new(vec![rat(1, 1), rat(1, 1)]), &a, &b).unwrap();
        let s = &a + &b + rat_int(2);
        assert_eq!(e.coeffs, vec![rat_int(2) * (&b + rat_int(1)) / &s, rat_int(2) * (&a + rat_int(1)) / &s]);

        // t^4 at (1/2, −1/2) against f̂_n = ∫ f C_n / ∫ C_n² from exact moments
        let (a, b) = (rat(1, 2), rat(-1, 2));
        let t4 = Poly::new(vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]);
        let e = expand(&t4, &a, &b).unwrap();
        let m = moments(&a, &b, 10);
        for n in 0..=4 {
            let c = jacobi_normalized(&a, &b, n).unwrap();
            let oracle = integrate(&t4.mul(&c), &m) / integrate(&c.mul(&c), &m);
            assert_eq!(e.coeffs[n], oracle);
            assert_eq!(norm_sqr(&a, &b, n).unwrap(), integrate(&c.mul(&c), &m));
        }
        assert_eq!(e.to_power().unwrap(), t4);
        let sum: Rational = e.coeffs.iter().sum();
        assert_eq!(sum, rat(1, 1));
    }

    #[test]
    fn quadrature() {
        let (x, w) = gauss_jacobi(0.0, 0.0, 1).unwrap();
        assert!(x[0].abs() < 1e-15 && (w[0] - 1.0).abs() < 1e-15);
        let (_, w) = gauss_jacobi(0.5, -0.5, 8).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(w.iter().all(|&v| v > 0.0));
        let (x, w) = gauss_jacobi(0.5, -0.5, 6).unwrap();
        let ip: f64 = x.iter().zip(&w).map(|(&t, &wi)| wi * jacobi_eval(0.5, -0.5, 2, t).unwrap() * jacobi_eval(0.5, -0.5, 3, t).unwrap()).sum();
        assert!(ip.abs() < 1e-13);
        for (a, b) in catalog_params() {
            let n = 7;
            let (x, w) = gauss_jacobi(rat_to(&a), rat_to(&b), n).unwrap();
            let m = moments(&a, &b, 2 * n);
            for k in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(t, wi)| wi * t.powi(k as i32)).sum();
                assert!((q - m[k].to_f64().unwrap()).abs() < 1e-13, "k = {k} at ({a}, {b})");
            }
        }
    }

    #[test]
    fn orthogonality() {
        for (a, b) in catalog_params() {
            let (af, bf) = (rat_to(&a), rat_to(&b));
            let (x, w) = gauss_jacobi(af, bf, 20).unwrap();
            let vals: Vec<Vec<f64>> = x.iter().map(|&t| jacobi_eval_all(af, bf, 12, t)).collect();
            for n in 0..=12 {
                for m in 0..n {
                    let ip: f64 = vals.iter().zip(&w).map(|(v, wi)| wi * v[n] * v[m]).sum();
                    assert!(ip.abs() < 1e-12, "<C_{n}, C_{m}> = {ip} at ({a}, {b})");
                }
            }
        }
    }

    #[test]
    fn gram_matrices_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spaces = [
            SpaceDescriptor::projective(Field::R, 3).unwrap(),
            SpaceDescriptor::projective(Field::R, 4).unwrap(),
            SpaceDescriptor::projective(Field::R, 8).unwrap(),
            SpaceDescriptor::projective(Field::C, 3).unwrap(),
            SpaceDescriptor::projective(Field::C, 5).unwrap(),
            SpaceDescriptor::projective(Field::H, 2).unwrap(),
            SpaceDescriptor::sphere(Field::R, 3).unwrap(),
            SpaceDescriptor::new(Field::R, 2, Kind::Sphere).unwrap(),
        ];
        for space in spaces {
            let (a, b) = space.params();
            let (af, bf) = (rat_to(&a), rat_to(&b));
            for _ in 0..50 {
                let pts: Vec<UnitVector> = (0..12).map(|_| UnitVector::random(space.field, space.d, &mut rng)).collect();
                let vals: Vec<Vec<Vec<f64>>> = pts
                    .iter()
                    .map(|x| pts.iter().map(|y| jacobi_eval_all(af, bf, 10, space.tau(x, y).unwrap())).collect())
                    .collect();
                for n in 0..=10 {
                    let g = DMatrix::from_fn(12, 12, |i, j| vals[i][j][n]);
                    let min = g.symmetric_eigenvalues().min();
                    assert!(min >= -1e-9, "{space} n = {n}: {min}");
                }
            }
        }
    }

    #[test]
    fn adjacent_families_expand_positively() {
        let one = rat_int(1);
        for (a, b) in catalog_params() {
            let basis = JacobiBasis::new(&a, &b, 11).unwrap();
            for n in 0..=10 {
                let q10 = jacobi_monic(&(&a + &one), &b, n).unwrap();
                assert!(rational_nonneg(&basis.expand(&q10).unwrap()), "Q^(1,0)_{n} at ({a}, {b})");
                let q11 = jacobi_monic(&(&a + &one), &(&b + &one), n).unwrap();
                let p = q11.mul(&Poly::new(vec![one.clone(), one.clone()]));
                assert!(rational_nonneg(&basis.expand(&p).unwrap()), "(t+1)Q^(1,1)_{n} at ({a}, {b})");
            }
        }
    }

    #[test]
    fn subproducts_expand_positively() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (a, b) in catalog_params() {
            let (af, bf) = (rat_to(&a), rat_to(&b));
            let basis = JacobiBasis::new(&a, &b, 8).unwrap();
            for m in 1..=6 {
                let gamma: f64 = rng.gen_range(-1.0..1.0);
                // roots of Q_{m+1} + γ Q_m: truncated Jacobi matrix with last diagonal a_m − γ
                let n = m + 1;
                let mut j = DMatrix::<f64>::zeros(n, n);
                for k in 0..n {
                    j[(k, k)] = recurrence_f64(af, bf, k).0;
                    if k + 1 < n {
                        let s = recurrence_f64(af, bf, k + 1).1.sqrt();
                        j[(k, k + 1)] = s;
                        j[(k + 1, k)] = s;
                    }
                }
                j[(m, m)] -= gamma;
                let mut roots: Vec<f64> = j.symmetric_eigenvalues().iter().copied().collect();
                roots.sort_by(f64::total_cmp);
                for k in 1..n {
                    let p = Poly::<f64>::from_roots(&roots[..k]);
                    let e = basis.expand(&p).unwrap();
                    assert!(e.coeffs.iter().all(|&c| c >= -1e-10), "k = {k}, m = {m}, γ = {gamma}: {:?}", e.coeffs);
                }
            }
        }
    }

    #[test]
    fn definiteness_verdicts() {
        let (a, b) = SpaceDescriptor::projective(Field::R, 3).unwrap().params();
        let mut p = Poly::constant(rat(1, 1));
        for _ in 0..5 {
            p = p.mul(&Poly::new(vec![rat(1, 1), rat(1, 1)]));
            let e = expand(&p.to_f64(), &a, &b).unwrap();
            assert_eq!(is_positive_definite(&e, DEFAULT_PD_TOL), Definiteness::Yes);
        }
        let coeffs = project(|t| ((1.0 + t) / 2.0).powf(1.5), &a, &b, 6, 60).unwrap();
        let e = JacobiExpansion { alpha: a.clone(), beta: b.clone(), coeffs };
        assert_eq!(is_positive_definite(&e, DEFAULT_PD_TOL), Definiteness::No);
        let z = JacobiExpansion::<f64> { alpha: a.clone(), beta: b.clone(), coeffs: vec![] };
        assert_eq!(is_positive_definite(&z, DEFAULT_PD_TOL), Definiteness::Yes);
        let m = JacobiExpansion { alpha: a, beta: b, coeffs: vec![1.0, -1e-13] };
        assert_eq!(is_positive_definite(&m, DEFAULT_PD_TOL), Definiteness::Marginal);
    }

    proptest! {
        #[test]
        fn power_round_trip(c in proptest::collection::vec(-10.0f64..10.0, 1..10), ai in 0usize..6) {
            let (a, b) = catalog_params()[ai].clone();
            let p = Poly::new(c.clone());
            let e = expand(&p, &a, &b).unwrap();
            let back = e.to_power().unwrap();
            let scale = c.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for k in 0..c.len() {
                prop_assert!((back.coeff(k) - p.coeff(k)).abs() <= 1e-12 * scale * 10.0);
            }
            let s: f64 = e.coeffs.iter().sum();
            prop_assert!((e.eval(1.0) - s).abs() < 1e-12 * scale * 10.0);
            prop_assert!((e.eval(0.3) - p.eval(&0.3)).abs() < 1e-11 * scale * 10.0);
        }
    }
}
