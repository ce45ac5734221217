//! Multistart projected gradient descent over weighted particle measures.
//!
//! Positions take Riemannian steps (preconditioned by `1/w_i`, retracted by
//! normalization); weights take projected steps on the probability simplex. Both use
//! Armijo backtracking with halving.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configurations::{catalog_entry, catalog_names, WeightedConfiguration};
use crate::energy::{energy_value, Accumulator};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::lpbound::entry_energy;
use crate::spaces::{chordal_distance, inner_raw, tau_from_inner, Field, Kind, Quat, SpaceDescriptor, UnitVector};

pub const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizeOptions {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Iterations between support merges; `0` disables them.
    pub polish_every: usize,
    pub merge_tol: f64,
    pub weight_floor: f64,
    pub optimize_weights: bool,
    /// Stop once the energy has moved less than `1e-15` (relative) over this many iterations.
    pub stall_window: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            max_iters: 20_000,
            grad_tol: 1e-8,
            polish_every: 400,
            merge_tol: 1e-4,
            weight_floor: 1e-8,
            optimize_weights: true,
            stall_window: 200,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParticleState {
    pub config: WeightedConfiguration,
    pub energy: f64,
    /// Energies after accepted steps; support merges start a new segment.
    pub trace: Vec<f64>,
    pub segments: Vec<usize>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub weight_grad_norm: f64,
    pub converged: bool,
    pub stalled: bool,
    /// Set when the kernel had to be differentiated at a kink.
    pub subgradient: bool,
    pub seed: u64,
    pub start: u64,
}

/// Energy and gradients on raw components.
struct Objective<'a> {
    field: Field,
    kind: Kind,
    kernel: &'a Kernel,
}

impl Objective<'_> {
    fn tau(&self, x: &[f64], y: &[f64]) -> (f64, Quat) {
        let s = inner_raw(self.field, x, y);
        (tau_from_inner(s, self.kind), s)
    }

    fn energy(&self, xs: &[Vec<f64>], w: &[f64]) -> f64 {
        let n = xs.len();
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = Accumulator::default();
                acc.add(w[i] * w[i] * self.kernel.eval(1.0).unwrap_or(f64::NAN));
                for j in i + 1..n {
                    let (t, _) = self.tau(&xs[i], &xs[j]);
                    acc.add(2.0 * w[i] * w[j] * self.kernel.eval(t).unwrap_or(f64::NAN));
                }
                acc.value()
            })
            .collect();
        let mut acc = Accumulator::default();
        rows.into_iter().for_each(|r| acc.add(r));
        acc.value()
    }

    fn derivative(&self, t: f64, kinked: &mut bool) -> f64 {
        match self.kernel.derivative(t.max(-1.0 + 1e-12), 1) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => v.signum() * 1e12,
            Err(_) => {
                *kinked = true;
                0.0
            }
        }
    }

    /// Euclidean position gradients and the weight gradient `2 F w`.
    fn gradients(&self, xs: &[Vec<f64>], w: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>, bool) {
        let n = xs.len();
        let k = self.field.dim_r();
        let f1 = self.kernel.eval(1.0).unwrap_or(f64::NAN);
        let rows: Vec<(Vec<f64>, f64, bool)> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut g = vec![0.0; xs[i].len()];
                let mut wg = Accumulator::default();
                wg.add(2.0 * w[i] * f1);
                let mut kinked = false;
                for j in 0..n {
                    if j == i {
                        continue;
                    }
                    let (t, s) = self.tau(&xs[i], &xs[j]);
                    wg.add(2.0 * w[j] * self.kernel.eval(t).unwrap_or(f64::NAN));
                    let c = 2.0 * w[i] * w[j] * self.derivative(t, &mut kinked);
                    match self.kind {
                        Kind::Sphere => g.iter_mut().zip(&xs[j]).for_each(|(gi, y)| *gi += c * y),
                        Kind::Projective => {
                            // ∂τ/∂x_k = 4 y_k s
                            for (gk, yk) in g.chunks_exact_mut(k).zip(xs[j].chunks_exact(k)) {
                                let mut q = [0.0; 4];
                                q[..k].copy_from_slice(yk);
                                let ys = Quat(q) * s;
                                gk.iter_mut().zip(&ys.0[..k]).for_each(|(gi, v)| *gi += 4.0 * c * v);
                            }
                        }
                    }
                }
                (g, wg.value(), kinked)
            })
            .collect();
        let kinked = rows.iter().any(|r| r.2);
        let (gs, wg): (Vec<Vec<f64>>, Vec<f64>) = rows.into_iter().map(|(g, w, _)| (g, w)).unzip();
        (gs, wg, kinked)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Euclidean projection onto the probability simplex.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut w: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

fn random_start(space: &SpaceDescriptor, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| UnitVector::random(space.field, space.d, rng).components().to_vec()).collect()
}

fn to_config(space: &SpaceDescriptor, xs: &[Vec<f64>], w: &[f64]) -> Result<WeightedConfiguration> {
    let points = xs.iter().map(|x| UnitVector::new(space.field, x.clone())).collect::<Result<Vec<_>>>()?;
    WeightedConfiguration::new(*space, points, w.to_vec())
}

/// One descent run from a seeded random start.
pub fn minimize_energy(
    space: SpaceDescriptor,
    kernel: &Kernel,
    n: usize,
    seed: u64,
    opts: &MinimizeOptions,
) -> Result<ParticleState> {
    run(space, kernel, n, seed, 0, opts)
}

fn run(space: SpaceDescriptor, kernel: &Kernel, n: usize, seed: u64, start: u64, opts: &MinimizeOptions) -> Result<ParticleState> {
    space.validate()?;
    kernel.validate()?;
    kernel.check_space(&space)?;
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one particle".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(start);
    let mut xs = random_start(&space, n, &mut rng);
    let mut w = vec![1.0 / n as f64; n];
    let obj = Objective { field: space.field, kind: space.kind, kernel };
    descend(&space, &obj, &mut xs, &mut w, opts, seed, start)
}

fn descend(
    space: &SpaceDescriptor,
    obj: &Objective,
    xs: &mut Vec<Vec<f64>>,
    w: &mut Vec<f64>,
    opts: &MinimizeOptions,
    seed: u64,
    start: u64,
) -> Result<ParticleState> {
    let mut e = obj.energy(xs, w);
    let mut trace = vec![e];
    let mut segments = vec![0];
    let mut alpha: f64 = 1.0;
    let mut beta: f64 = 1.0;
    let mut subgradient = false;
    let (mut gn, mut wgn) = (f64::INFINITY, f64::INFINITY);
    let mut converged = false;
    let mut stalled = false;
    let mut anchor = (0, e);
    let mut it = 0;
    while it < opts.max_iters {
        it += 1;
        let (g, wg, kinked) = obj.gradients(xs, w);
        subgradient |= kinked;
        // Riemannian projection onto the tangent space of each sphere
        let rg: Vec<Vec<f64>> = g
            .iter()
            .zip(xs.iter())
            .map(|(g, x)| {
                let r = dot(g, x);
                g.iter().zip(x).map(|(gi, xi)| gi - r * xi).collect()
            })
            .collect();
        gn = rg.iter().map(|r| dot(r, r)).sum::<f64>().sqrt();
        let pw = project_simplex(&w.iter().zip(&wg).map(|(a, b)| a - b).collect::<Vec<_>>());
        wgn = w.iter().zip(&pw).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if gn <= opts.grad_tol && (!opts.optimize_weights || wgn <= opts.grad_tol) {
            converged = true;
            break;
        }
        let floor = 1e-3 / xs.len() as f64;
        let dir: Vec<Vec<f64>> = rg.iter().zip(w.iter()).map(|(r, wi)| r.iter().map(|v| -v / wi.max(floor)).collect()).collect();
        let slope: f64 = rg.iter().zip(&dir).map(|(r, d)| dot(r, d)).sum();
        if slope < 0.0 {
            let mut a = (alpha * 2.0).min(1e3);
            for _ in 0..MAX_HALVINGS {
                let trial: Vec<Vec<f64>> = xs
                    .iter()
                    .zip(&dir)
                    .map(|(x, d)| {
                        let mut y: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi + a * di).collect();
                        normalize(&mut y);
                        y
                    })
                    .collect();
                let et = obj.energy(&trial, w);
                if et <= e + ARMIJO_C * a * slope {
                    *xs = trial;
                    e = et;
                    alpha = a;
                    trace.push(e);
                    break;
                }
                a *= 0.5;
            }
        }
        if opts.optimize_weights && xs.len() > 1 {
            let (_, wg, _) = obj.gradients(xs, w);
            let mut b = (beta * 2.0).min(1e3);
            for _ in 0..MAX_HALVINGS {
                let cand = project_simplex(&w.iter().zip(&wg).map(|(a, g)| a - b * g).collect::<Vec<_>>());
                let decrease: f64 = wg.iter().zip(cand.iter().zip(w.iter())).map(|(g, (c, o))| g * (c - o)).sum();
                let et = obj.energy(xs, &cand);
                if et <= e + ARMIJO_C * decrease && et <= e {
                    *w = cand;
                    e = et;
                    beta = b;
                    trace.push(e);
                    break;
                }
                b *= 0.5;
            }
        }
        if it - anchor.0 >= opts.stall_window.max(1) {
            if anchor.1 - e <= 1e-15 * e.abs() {
                stalled = true;
                break;
            }
            anchor = (it, e);
        }
        if opts.polish_every > 0 && it % opts.polish_every == 0 {
            let before = xs.len();
            let (nx, nw) = merge_support(space, xs, w, opts.merge_tol, opts.weight_floor);
            if nx.len() < before {
                *xs = nx;
                *w = nw;
                e = obj.energy(xs, w);
                segments.push(trace.len());
                trace.push(e);
            }
        }
    }
    let config = to_config(space, xs, w)?;
    Ok(ParticleState {
        config,
        energy: e,
        trace,
        segments,
        iterations: it,
        grad_norm: gn,
        weight_grad_norm: wgn,
        converged,
        stalled,
        subgradient,
        seed,
        start,
    })
}

/// Independent runs in parallel; run `i` uses stream `i` of the seeded generator.
pub fn multistart(
    space: SpaceDescriptor,
    kernel: &Kernel,
    n: usize,
    starts: usize,
    seed: u64,
    opts: &MinimizeOptions,
) -> Result<Vec<ParticleState>> {
    (0..starts as u64).into_par_iter().map(|s| run(space, kernel, n, seed, s, opts)).collect()
}

/// Lowest-energy state.
pub fn best_of(states: &[ParticleState]) -> Option<&ParticleState> {
    states.iter().min_by(|a, b| a.energy.total_cmp(&b.energy))
}

fn merge_support(
    space: &SpaceDescriptor,
    xs: &[Vec<f64>],
    w: &[f64],
    merge_tol: f64,
    floor: f64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| w[b].total_cmp(&w[a]).then(a.cmp(&b)));
    let mut reps: Vec<(Vec<f64>, f64)> = Vec::new();
    for i in order {
        let hit = reps.iter_mut().find(|(x, _)| {
            let t = tau_from_inner(inner_raw(space.field, x, &xs[i]), space.kind);
            chordal_distance(t) < merge_tol
        });
        match hit {
            Some((_, wr)) => *wr += w[i],
            None => reps.push((xs[i].clone(), w[i])),
        }
    }
    reps.retain(|(_, wi)| *wi >= floor);
    let total: f64 = reps.iter().map(|r| r.1).sum();
    reps.into_iter().map(|(x, wi)| (x, wi / total)).unzip()
}

/// Merges points closer than `merge_tol` in chordal distance (weights summed, heaviest
/// representative kept), drops weights below `weight_floor`, and renormalizes.
pub fn canonicalize_support(state: &ParticleState, merge_tol: f64, weight_floor: f64) -> Result<WeightedConfiguration> {
    canonicalize_config(&state.config, merge_tol, weight_floor)
}

pub fn canonicalize_config(config: &WeightedConfiguration, merge_tol: f64, weight_floor: f64) -> Result<WeightedConfiguration> {
    let xs: Vec<Vec<f64>> = config.points.iter().map(|p| p.components().to_vec()).collect();
    let (nx, nw) = merge_support(&config.space, &xs, &config.weights, merge_tol, weight_floor);
    to_config(&config.space, &nx, &nw)
}

pub const MATCH_TOL: f64 = 1e-4;

/// Distance values clustered single-linkage with gap `tol`; descent output is only
/// accurate to roughly the square root of the gradient tolerance.
pub fn coarse_distances(config: &WeightedConfiguration, tol: f64) -> Vec<f64> {
    let n = config.len();
    let mut vals: Vec<f64> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| config.tau(i, j)).collect();
    vals.sort_by(f64::total_cmp);
    let mut groups: Vec<(f64, usize)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for v in vals {
        match groups.last_mut() {
            Some(g) if v - last <= tol => {
                g.0 += v;
                g.1 += 1;
            }
            _ => groups.push((v, 1)),
        }
        last = v;
    }
    groups.into_iter().map(|(s, c)| s / c as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogComparison {
    pub energy: f64,
    pub support: usize,
    pub distances: Vec<f64>,
    /// Entry with the same support size and distance set.
    pub matched: Option<String>,
    /// Reference entry: the match, else the lowest-energy entry in the space.
    pub reference: Option<String>,
    pub reference_energy: Option<f64>,
    /// `(energy − reference) / reference`.
    pub relative_gap: Option<f64>,
    pub strength_matches: Option<bool>,
}

/// Compares a configuration with catalog entries in its space by support size,
/// distance set (to `1e-4`) and energy.
pub fn compare_to_catalog(config: &WeightedConfiguration, kernel: &Kernel) -> Result<CatalogComparison> {
    let energy = energy_value(config, kernel)?;
    let ds = coarse_distances(config, MATCH_TOL);
    let mut candidates: Vec<(String, f64, bool, usize)> = Vec::new();
    for name in catalog_names() {
        let Ok(entry) = catalog_entry(&name) else { continue };
        if entry.space != config.space {
            continue;
        }
        let Ok(e) = entry_energy(&entry, kernel) else { continue };
        let same = entry.n == config.len()
            && entry.distances.as_ref().is_some_and(|d| {
                d.len() == ds.len() && d.iter().zip(&ds).all(|(a, b)| (a.to_f64() - b).abs() < MATCH_TOL)
            });
        candidates.push((name, e, same, entry.strength));
    }
    let matched = candidates.iter().find(|c| c.2);
    let reference = matched.or_else(|| candidates.iter().min_by(|a, b| a.1.total_cmp(&b.1)));
    let strength_matches = matched.map(|m| {
        let s = crate::configurations::design_strength(config, m.3 + 1);
        s.strength >= m.3
    });
    Ok(CatalogComparison {
        energy,
        support: config.len(),
        distances: ds,
        matched: matched.map(|m| m.0.clone()),
        reference: reference.map(|r| r.0.clone()),
        reference_energy: reference.map(|r| r.1),
        relative_gap: reference.map(|r| (energy - r.1) / r.1),
        strength_matches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    pub energy: f64,
    pub support: usize,
    pub distances: Vec<f64>,
}

/// Runs `p = q − 10^{−k}`, `k = 1..=levels`, keeping the best multistart result at each.
pub fn p_sweep(
    space: SpaceDescriptor,
    q: f64,
    n: usize,
    starts: usize,
    seed: u64,
    levels: u32,
    opts: &MinimizeOptions,
) -> Result<Vec<SweepPoint>> {
    (1..=levels)
        .map(|k| {
            let p = q - 10f64.powi(-(k as i32));
            let kernel = Kernel::pframe(p)?;
            let runs = multistart(space, &kernel, n, starts, seed, opts)?;
            let best = best_of(&runs).ok_or_else(|| Error::InvalidParameter("no starts".into()))?;
            let c = canonicalize_support(best, opts.merge_tol, opts.weight_floor)?;
            Ok(SweepPoint { p, energy: best.energy, support: c.len(), distances: coarse_distances(&c, MATCH_TOL) })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::catalog_get;
    use crate::lpbound::rp;

    fn quick() -> MinimizeOptions {
        MinimizeOptions { max_iters: 4000, ..Default::default() }
    }

    #[test]
    fn simplex_projection() {
        let w = project_simplex(&[0.5, 0.8, -0.2]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|x| *x >= 0.0));
        assert!((w[0] - 0.35).abs() < 1e-12 && (w[1] - 0.65).abs() < 1e-12 && w[2] == 0.0);
        assert_eq!(project_simplex(&[0.25; 4]), vec![0.25; 4]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let k = Kernel::pframe(3.0).unwrap();
        for space in [rp(3), SpaceDescriptor { field: Field::C, d: 2, kind: Kind::Projective }, SpaceDescriptor { field: Field::H, d: 2, kind: Kind::Projective }, SpaceDescriptor { field: Field::R, d: 3, kind: Kind::Sphere }] {
            let obj = Objective { field: space.field, kind: space.kind, kernel: &k };
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let xs = random_start(&space, 4, &mut rng);
            let w = vec![0.1, 0.2, 0.3, 0.4];
            let (g, wg, _) = obj.gradients(&xs, &w);
            let h = 1e-6;
            for c in 0..xs[1].len() {
                let mut up = xs.clone();
                up[1][c] += h;
                let mut dn = xs.clone();
                dn[1][c] -= h;
                let fd = (obj.energy(&up, &w) - obj.energy(&dn, &w)) / (2.0 * h);
                assert!((fd - g[1][c]).abs() < 1e-6, "{space} {c}: {fd} vs {}", g[1][c]);
            }
            let mut up = w.clone();
            up[2] += h;
            let mut dn = w.clone();
            dn[2] -= h;
            let fd = (obj.energy(&xs, &up) - obj.energy(&xs, &dn)) / (2.0 * h);
            assert!((fd - wg[2]).abs() < 1e-6);
        }
    }

    #[test]
    fn descent_is_monotone_and_stays_on_simplex() {
        let k = Kernel::pframe(3.0).unwrap();
        let s = minimize_energy(rp(3), &k, 12, 7, &MinimizeOptions { max_iters: 500, ..Default::default() }).unwrap();
        let mut bounds = s.segments.clone();
        bounds.push(s.trace.len());
        for seg in bounds.windows(2) {
            for pair in s.trace[seg[0]..seg[1]].windows(2) {
                assert!(pair[1] <= pair[0] + 1e-15);
            }
        }
        assert!((s.config.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(s.config.weights.iter().all(|w| *w >= 0.0));
        assert!((energy_value(&s.config, &k).unwrap() - s.energy).abs() < 1e-12);
    }

    #[test]
    fn hexagon_lines() {
        let k = Kernel::pframe(3.0).unwrap();
        let circle = SpaceDescriptor { field: Field::R, d: 2, kind: Kind::Sphere };
        let runs = multistart(circle, &k, 8, 4, 11, &quick()).unwrap();
        let best = best_of(&runs).unwrap();
        assert!((best.energy - 0.4166666666666667).abs() < 1e-6, "{}", best.energy);
        let c = canonicalize_support(best, 1e-4, 1e-8).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn canonicalize_merges_and_prunes() {
        let base = catalog_get("icosahedron").unwrap();
        let dup = base.duplicated();
        let c = canonicalize_config(&dup, 1e-4, 1e-8).unwrap();
        assert_eq!(c.len(), 6);
        assert!(c.weights.iter().all(|w| (w - 1.0 / 6.0).abs() < 1e-15));
        let mut pts = base.points.clone();
        pts.push(UnitVector::from_real(&[1.0, 2.0, 3.0]).unwrap());
        let mut w = vec![(1.0 - 1e-12) / 6.0; 6];
        w.push(1e-12);
        let stray = WeightedConfiguration::new(base.space, pts, w).unwrap();
        assert_eq!(canonicalize_config(&stray, 1e-4, 1e-8).unwrap().len(), 6);
    }

    #[test]
    fn catalog_comparison() {
        let k = Kernel::pframe(3.0).unwrap();
        let r = compare_to_catalog(&catalog_get("icosahedron").unwrap(), &k).unwrap();
        assert_eq!(r.matched.as_deref(), Some("icosahedron"));
        assert!(r.relative_gap.unwrap().abs() < 1e-12);
        assert_eq!(r.strength_matches, Some(true));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let xs = random_start(&rp(3), 9, &mut rng);
        let c = to_config(&rp(3), &xs, &[1.0 / 9.0; 9]).unwrap();
        let r = compare_to_catalog(&c, &k).unwrap();
        assert!(r.matched.is_none());
        assert!(r.relative_gap.unwrap() > 0.0);
    }

    #[test]
    fn rp2_collapses_to_six_lines() {
        let k = Kernel::pframe(3.0).unwrap();
        let runs = multistart(rp(3), &k, 20, 32, 2024, &MinimizeOptions::default()).unwrap();
        let hits = runs
            .iter()
            .filter(|r| {
                (r.energy - 0.241202265916660).abs() < 1e-6 && canonicalize_support(r, 1e-4, 1e-8).unwrap().len() == 6
            })
            .count();
        assert!(hits >= 16, "{hits}/32");
        let again = multistart(rp(3), &k, 20, 2, 2024, &MinimizeOptions::default()).unwrap();
        assert_eq!(again[1].config.weights, runs[1].config.weights);
    }

    #[test]
    fn rp3_finds_the_24_cell() {
        let k = Kernel::pframe(5.0).unwrap();
        let runs = multistart(rp(4), &k, 40, 8, 2024, &MinimizeOptions::default()).unwrap();
        let best = best_of(&runs).unwrap();
        let c = canonicalize_support(best, 1e-4, 1e-8).unwrap();
        let cmp = compare_to_catalog(&c, &k).unwrap();
        assert_eq!(cmp.matched.as_deref(), Some("24-cell"));
        assert!(cmp.relative_gap.unwrap().abs() < 1e-8);
    }

    #[test]
    fn unit_scalar_symmetrization_keeps_energy() {
        let space = SpaceDescriptor { field: Field::C, d: 3, kind: Kind::Projective };
        let k = Kernel::pframe(3.0).unwrap();
        let s = minimize_energy(space, &k, 10, 5, &MinimizeOptions { max_iters: 300, ..Default::default() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = s
            .config
            .points
            .iter()
            .map(|x| x.scale_right(crate::spaces::random_unit_scalar(Field::C, &mut rng)))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let sym = WeightedConfiguration::new(space, pts, s.config.weights.clone()).unwrap();
        assert!((energy_value(&sym, &k).unwrap() - s.energy).abs() <= 1e-10);
    }
}
