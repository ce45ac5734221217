//! Energies of discrete measures, of the uniform measure, and of non-normalized vectors.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configurations::{catalog_entry, catalog_get, distance_set, CatalogEntry, DistanceSet, ExpectedEnergy, WeightRule, WeightedConfiguration};
use crate::error::{Error, Result};
use crate::exact::{rat_int, rat_to_f64, Rational};
use crate::jacobi::gauss_jacobi;
use crate::kernels::{causal_kink, causal_poly, pframe_mean, Kernel};
use crate::polynomial::Poly;
use crate::spaces::{inner_raw, Field, SpaceDescriptor};

/// Neumaier compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut a = Accumulator::default();
    xs.into_iter().for_each(|x| a.add(x));
    a.value()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub value: f64,
    pub kernel: Kernel,
    pub space: SpaceDescriptor,
    pub n_points: usize,
    pub distance_census: DistanceSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl EnergyReport {
    pub fn with_target(mut self, target: f64, source: impl Into<String>) -> Self {
        self.abs_error = Some((self.value - target).abs());
        self.target = Some(target);
        self.source = Some(source.into());
        self
    }
}

/// `Σ_{i,j} ω_i ω_j f(τ_ij)`; rows are summed in parallel and combined in index order.
pub fn energy_value(config: &WeightedConfiguration, kernel: &Kernel) -> Result<f64> {
    kernel.validate()?;
    kernel.check_space(&config.space)?;
    let n = config.len();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Accumulator::default();
            for j in 0..n {
                let t = if i == j { 1.0 } else { config.tau(i, j) };
                acc.add(config.weights[j] * kernel.eval(t)?);
            }
            Ok(config.weights[i] * acc.value())
        })
        .collect::<Result<_>>()?;
    Ok(neumaier_sum(rows))
}

pub fn energy(config: &WeightedConfiguration, kernel: &Kernel) -> Result<EnergyReport> {
    Ok(EnergyReport {
        value: energy_value(config, kernel)?,
        kernel: kernel.clone(),
        space: config.space,
        n_points: config.len(),
        distance_census: distance_set(config),
        target: None,
        abs_error: None,
        source: None,
    })
}

/// `I_f(σ)`, the zeroth Jacobi coefficient of `f`. Non-polynomial kernels other than
/// the p-frame kernel use Gauss–Jacobi rules doubled up to `degree_cap` nodes.
pub fn uniform_measure_energy(kernel: &Kernel, space: &SpaceDescriptor, degree_cap: usize) -> Result<f64> {
    kernel.validate()?;
    kernel.check_space(space)?;
    let (alpha, beta) = space.params();
    let (a, b) = (rat_to_f64(&alpha), rat_to_f64(&beta));
    if let Kernel::PFrame { p } = kernel {
        return Ok(pframe_mean(*p, a, b));
    }
    if kernel.exact_polynomial().is_some() || kernel.polynomial_interval().is_some() {
        return Ok(kernel.jacobi_coefficients(&alpha, &beta, 0)?[0]);
    }
    if let Kernel::Causal { tau_sq, normalized } = kernel {
        if let Some(v) = causal_mean_exact(tau_sq, &alpha, &beta) {
            let scale = if *normalized { 1.0 / (8.0 * tau_sq.to_f64()) } else { 1.0 };
            return Ok(v * scale);
        }
    }
    let quad = |n: usize| -> Result<f64> {
        let (x, w) = gauss_jacobi(a, b, n)?;
        let terms = x.iter().zip(&w).map(|(t, w)| Ok(w * kernel.eval(*t)?)).collect::<Result<Vec<_>>>()?;
        Ok(neumaier_sum(terms))
    };
    let mut n = 16;
    let mut prev = quad(n)?;
    while 2 * n <= degree_cap.max(32) {
        n *= 2;
        let next = quad(n)?;
        if (next - prev).abs() <= 1e-10 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Numerical(format!("quadrature for {kernel} did not settle within {n} nodes")))
}

/// Exact mean of the causal kernel when the Jacobi weight is a polynomial (nonnegative integer α, β).
fn causal_mean_exact(tau_sq: &crate::exact::Surd, alpha: &Rational, beta: &Rational) -> Option<f64> {
    if !alpha.is_integer() || !beta.is_integer() || alpha < &rat_int(0) || beta < &rat_int(0) {
        return None;
    }
    let pow = |base: Poly<f64>, k: &Rational| (0..k.to_integer().try_into().unwrap_or(0u32)).fold(Poly::constant(1.0), |acc, _| acc.mul(&base));
    let weight = pow(Poly::new(vec![1.0, -1.0]), alpha).mul(&pow(Poly::new(vec![1.0, 1.0]), beta));
    let integrate = |p: &Poly<f64>, lo: f64, hi: f64| {
        p.c.iter().enumerate().map(|(k, c)| c * (hi.powi(k as i32 + 1) - lo.powi(k as i32 + 1)) / (k as f64 + 1.0)).sum::<f64>()
    };
    let kink = causal_kink(tau_sq).to_f64().max(-1.0);
    let poly = causal_poly(tau_sq).map(crate::exact::Surd::to_f64);
    Some(integrate(&poly.mul(&weight), kink, 1.0) / integrate(&weight, -1.0, 1.0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NoncompactReport {
    pub value: f64,
    pub p: f64,
    /// `Σ ω_i |x_i|²`.
    pub second_moment: f64,
}

/// `Σ ω_i ω_j |⟨x_i, x_j⟩|^p` over raw vectors subject to `Σ ω_i |x_i|² = 1`.
pub fn noncompact_energy(field: Field, vectors: &[Vec<f64>], weights: &[f64], p: f64) -> Result<NoncompactReport> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("the non-compact energy needs p >= 2, got {p}")));
    }
    if vectors.len() != weights.len() || vectors.is_empty() {
        return Err(Error::Mismatch(format!("{} vectors and {} weights", vectors.len(), weights.len())));
    }
    let len = vectors[0].len();
    if len % field.dim_r() != 0 || vectors.iter().any(|v| v.len() != len) {
        return Err(Error::Mismatch("vectors must share one length divisible by the field dimension".into()));
    }
    let m2 = neumaier_sum(vectors.iter().zip(weights).map(|(v, w)| w * v.iter().map(|x| x * x).sum::<f64>()));
    if (m2 - 1.0).abs() > 1e-10 {
        return Err(Error::Constraint(format!("second moment is {m2}, not 1")));
    }
    let mut acc = Accumulator::default();
    for (x, wx) in vectors.iter().zip(weights) {
        for (y, wy) in vectors.iter().zip(weights) {
            acc.add(wx * wy * inner_raw(field, x, y).abs().powf(p));
        }
    }
    Ok(NoncompactReport { value: acc.value(), p, second_moment: m2 })
}

/// Re-optimizes the total weight carried by each orbit class (`config.classes`) for `kernel`,
/// keeping weights equal inside a class.
pub fn optimize_class_weights(config: &WeightedConfiguration, kernel: &Kernel) -> Result<WeightedConfiguration> {
    let k = config.classes.iter().max().map_or(0, |m| m + 1);
    if k > 16 {
        return Err(Error::InvalidParameter(format!("{k} classes is too many for exhaustive active sets")));
    }
    let sizes: Vec<f64> = (0..k).map(|a| config.classes.iter().filter(|&&c| c == a).count() as f64).collect();
    let n = config.len();
    let mut s = DMatrix::<f64>::zeros(k, k);
    for i in 0..n {
        for j in 0..n {
            let t = if i == j { 1.0 } else { config.tau(i, j) };
            s[(config.classes[i], config.classes[j])] += kernel.eval(t)?;
        }
    }
    let m = DMatrix::from_fn(k, k, |a, b| s[(a, b)] / (sizes[a] * sizes[b]));
    let mut best: Option<(f64, DVector<f64>)> = None;
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|a| mask >> a & 1 == 1).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]);
        let Some(sol) = sub.lu().solve(&DVector::from_element(idx.len(), 1.0)) else { continue };
        let total: f64 = sol.sum();
        if total.abs() < 1e-300 {
            continue;
        }
        let w = sol / total;
        if w.iter().any(|x| *x < -1e-14) {
            continue;
        }
        let mut full = DVector::zeros(k);
        idx.iter().zip(w.iter()).for_each(|(&a, &x)| full[a] = x.max(0.0));
        let e = (full.transpose() * &m * &full)[(0, 0)];
        if best.as_ref().is_none_or(|(b, _)| e < *b) {
            best = Some((e, full));
        }
    }
    let (_, w) = best.ok_or_else(|| Error::Numerical("no feasible class weighting".into()))?;
    let weights = config.classes.iter().map(|&c| w[c] / sizes[c]).collect();
    WeightedConfiguration::with_classes(config.space, config.points.clone(), weights, config.classes.clone())
}

/// Energy for one expected value of a catalog entry.
pub fn catalog_energy(entry: &CatalogEntry, expected: &ExpectedEnergy) -> Result<f64> {
    let kernel = Kernel::pframe(expected.p)?;
    if entry.metadata_only {
        return entry.energy_from_multiplicities(&kernel);
    }
    let config = catalog_get(&entry.name)?;
    let config = match expected.weights {
        WeightRule::Design => config,
        WeightRule::Optimized => optimize_class_weights(&config, &kernel)?,
    };
    energy_value(&config, &kernel)
}

/// Recomputes every expected energy of the named entry: `(p, expected, computed)`.
pub fn check_catalog_energies(name: &str) -> Result<Vec<(f64, f64, f64)>> {
    let entry = catalog_entry(name)?;
    entry.energies.iter().map(|e| Ok((e.p, e.value, catalog_energy(&entry, e)?))).collect()
}
