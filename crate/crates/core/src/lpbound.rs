//! Numeric linear programming lower bounds.
//!
//! Maximize `ĥ_0` over `h = Σ_{n ≤ D} ĥ_n C_n` with `ĥ_n ≥ 0` and `h(t_j) ≤ f(t_j)` on a
//! finite grid, refine the grid at the worst violations, then shrink the optimum and
//! hand it to the interval verifier.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, CertificateKind, Direction, Verdict};
use crate::configurations::{catalog_entry, catalog_get, catalog_names, CatalogEntry};
use crate::energy::{energy_value, optimize_class_weights};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::jacobi::jacobi_eval_all;
use crate::kernels::Kernel;
use crate::spaces::{Field, Kind, SpaceDescriptor};

/// Simplex pivot tolerance.
const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;
/// Grid violations below this are left alone.
const CUT_TOL: f64 = 1e-13;
const MAX_CUT_ROUNDS: usize = 200;
/// Dense scan used to locate violations between grid points.
const SCAN_POINTS: usize = 4001;

/// `max c·x` subject to `A x ≤ b`, `x ≥ 0`, with `b ≥ 0`.
#[derive(Clone, Debug)]
pub struct DenseLp {
    pub c: Vec<f64>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

/// Dense tableau simplex with Bland's rule, started from the slack basis. The final
/// basic solution is recomputed from the original data by an LU solve.
pub fn simplex_max(lp: &DenseLp) -> Result<SimplexSolution> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("inconsistent LP dimensions".into()));
    }
    if lp.b.iter().any(|&b| !(b >= 0.0)) {
        return Err(Error::InvalidParameter("the slack basis needs b >= 0".into()));
    }
    let cols = n + m;
    let mut t = vec![vec![0.0; cols + 1]; m];
    for i in 0..m {
        t[i][..n].copy_from_slice(&lp.a[i]);
        t[i][n + i] = 1.0;
        t[i][cols] = lp.b[i];
    }
    let mut obj: Vec<f64> = lp.c.iter().map(|c| -c).chain(std::iter::repeat(0.0).take(m + 1)).collect();
    let mut basis: Vec<usize> = (n..cols).collect();
    let mut pivots = 0;
    loop {
        let Some(enter) = (0..cols).find(|&j| obj[j] < -PIVOT_TOL) else { break };
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][enter] > PIVOT_TOL {
                let r = t[i][cols] / t[i][enter];
                let better = match leave {
                    None => true,
                    Some((l, best)) => r < best - 1e-15 || (r <= best + 1e-15 && basis[i] < basis[l]),
                };
                if better {
                    leave = Some((i, r));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(Error::Numerical("LP is unbounded".into()));
        };
        pivot(&mut t, &mut obj, row, enter);
        basis[row] = enter;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::Numerical(format!("simplex exceeded {MAX_PIVOTS} pivots")));
        }
    }
    let bm = DMatrix::from_fn(m, m, |i, k| {
        let j = basis[k];
        if j < n {
            lp.a[i][j]
        } else if j - n == i {
            1.0
        } else {
            0.0
        }
    });
    let xb = bm
        .lu()
        .solve(&DVector::from_column_slice(&lp.b))
        .unwrap_or_else(|| DVector::from_iterator(m, t.iter().map(|r| r[cols])));
    let mut x = vec![0.0; n];
    for (k, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = xb[k].max(0.0);
        }
    }
    let value = lp.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(SimplexSolution { x, value, pivots })
}

fn pivot(t: &mut [Vec<f64>], obj: &mut [f64], row: usize, col: usize) {
    let p = t[row][col];
    t[row].iter_mut().for_each(|v| *v /= p);
    let prow = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i != row && r[col] != 0.0 {
            let f = r[col];
            r.iter_mut().zip(&prow).for_each(|(v, q)| *v -= f * q);
        }
    }
    let f = obj[col];
    obj.iter_mut().zip(&prow).for_each(|(v, q)| *v -= f * q);
}

/// Discretized LP for one `(space, kernel, D)` cell.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub space: SpaceDescriptor,
    pub kernel: Kernel,
    pub degree: usize,
    pub grid: Vec<f64>,
}

/// Extrema `cos(πj/(N−1))` of the Chebyshev polynomial `T_{N−1}`.
pub fn chebyshev_extrema(n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![1.0],
        _ => (0..n).map(|j| (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos()).collect(),
    }
}

impl LpProblem {
    /// Chebyshev grid of size `4D` plus the distance sets of catalog entries in the space.
    pub fn new(space: SpaceDescriptor, kernel: Kernel, degree: usize) -> Result<Self> {
        let mut p = Self::with_grid(space, kernel, degree, chebyshev_extrema((4 * degree).max(2)))?;
        p.add_points(&catalog_hints(&space));
        Ok(p)
    }

    pub fn with_grid(space: SpaceDescriptor, kernel: Kernel, degree: usize, grid: Vec<f64>) -> Result<Self> {
        space.validate()?;
        kernel.validate()?;
        kernel.check_space(&space)?;
        if grid.iter().any(|t| !(-1.0..=1.0).contains(t)) {
            return Err(Error::Domain("grid points must lie in [-1, 1]".into()));
        }
        if grid.len() < (2 * degree).max(1) {
            return Err(Error::InvalidParameter(format!("{} grid points cannot constrain degree {degree}", grid.len())));
        }
        let mut p = LpProblem { space, kernel, degree, grid: Vec::new() };
        p.add_points(&grid);
        Ok(p)
    }

    fn add_points(&mut self, pts: &[f64]) {
        self.grid.extend_from_slice(pts);
        self.grid.sort_by(f64::total_cmp);
        self.grid.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    }

    fn jacobi_f64(&self) -> (f64, f64) {
        let (a, b) = self.space.params();
        (crate::exact::rat_to_f64(&a), crate::exact::rat_to_f64(&b))
    }

    /// `h(t)` for Jacobi coefficients `c`.
    pub fn eval_h(&self, c: &[f64], t: f64) -> f64 {
        let (a, b) = self.jacobi_f64();
        let v = jacobi_eval_all(a, b, self.degree, t);
        c.iter().zip(&v).map(|(c, v)| c * v).sum()
    }

    fn slack(&self, c: &[f64], t: f64) -> Result<f64> {
        Ok(self.kernel.eval(t)? - self.eval_h(c, t))
    }

    /// Largest violation `max(h − f)` over a dense scan, with golden-section refinement
    /// at each local maximum; returns the violating points.
    pub fn violations(&self, c: &[f64]) -> Result<(f64, Vec<f64>)> {
        let ts = chebyshev_extrema(SCAN_POINTS);
        let g: Vec<f64> = ts.iter().map(|&t| self.slack(c, t)).collect::<Result<_>>()?;
        let mut worst = g.iter().copied().fold(f64::INFINITY, f64::min);
        let mut cuts = Vec::new();
        for i in 0..ts.len() {
            let left = if i == 0 { f64::INFINITY } else { g[i - 1] };
            let right = if i + 1 == ts.len() { f64::INFINITY } else { g[i + 1] };
            if !(g[i] <= left && g[i] <= right) {
                continue;
            }
            let lo = ts[(i + 1).min(ts.len() - 1)];
            let hi = ts[i.saturating_sub(1)];
            let (t, v) = golden_min(|t| self.slack(c, t).unwrap_or(f64::INFINITY), lo.min(hi), lo.max(hi));
            let (t, v) = if v < g[i] { (t, v) } else { (ts[i], g[i]) };
            worst = worst.min(v);
            if v < -CUT_TOL {
                cuts.push(t);
            }
        }
        Ok((-worst, cuts))
    }

    fn dense_lp(&self) -> Result<DenseLp> {
        let (a, b) = self.jacobi_f64();
        let rows: Vec<Vec<f64>> = self.grid.iter().map(|&t| jacobi_eval_all(a, b, self.degree, t)).collect();
        let rhs: Vec<f64> = self.grid.iter().map(|&t| self.kernel.eval(t)).collect::<Result<_>>()?;
        if rhs.iter().any(|v| *v < 0.0) {
            return Err(Error::Unsupported("the slack start needs f >= 0 on the grid".into()));
        }
        let mut c = vec![0.0; self.degree + 1];
        c[0] = 1.0;
        Ok(DenseLp { c, a: rows, b: rhs })
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if b - a < 1e-15 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Distance sets of catalog entries living in `space`.
pub fn catalog_hints(space: &SpaceDescriptor) -> Vec<f64> {
    catalog_names()
        .iter()
        .filter_map(|n| catalog_entry(n).ok())
        .filter(|e| e.space == *space)
        .filter_map(|e| e.distances)
        .flatten()
        .map(|s| s.to_f64())
        .filter(|t| (-1.0..=1.0).contains(t))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawSolution {
    pub coeffs: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

/// Optimal basic solution of the LP on the problem's grid.
pub fn simplex_solve(problem: &LpProblem) -> Result<RawSolution> {
    let s = simplex_max(&problem.dense_lp()?)?;
    Ok(RawSolution { value: s.x[0], coeffs: s.x, pivots: s.pivots })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefinedSolution {
    pub raw: RawSolution,
    pub rounds: usize,
    pub grid_size: usize,
    /// `max(h − f)` on the dense scan after the last round.
    pub max_violation: f64,
}

/// Re-solves with the worst violation points added until `h ≤ f` holds on the scan.
pub fn solve_with_cuts(problem: &mut LpProblem) -> Result<RefinedSolution> {
    let mut rounds = 0;
    loop {
        let raw = simplex_solve(problem)?;
        let (viol, cuts) = problem.violations(&raw.coeffs)?;
        if cuts.is_empty() || rounds >= MAX_CUT_ROUNDS {
            return Ok(RefinedSolution { raw, rounds, grid_size: problem.grid.len(), max_violation: viol });
        }
        problem.add_points(&cuts);
        rounds += 1;
    }
}

/// Lowest `ε` tried by [`rigorize`]; escalated tenfold up to [`EPS_CAP`].
pub const EPS_START: f64 = 1e-9;
pub const EPS_CAP: f64 = 1e-4;

/// Shrinks every coefficient by `1 − ε`, lowers `ĥ_0` by a further `ε|ĥ_0|`, clips
/// negative coefficients, and verifies. The last attempt is returned if none verifies.
pub fn rigorize(raw: &RawSolution, problem: &LpProblem) -> Result<(Certificate, f64)> {
    let mut eps = EPS_START;
    loop {
        let mut c: Vec<f64> = raw.coeffs.iter().map(|x| x * (1.0 - eps)).collect();
        c[0] -= eps * raw.coeffs[0].abs();
        c.iter_mut().skip(1).for_each(|x| *x = x.max(0.0));
        let jac: Vec<Interval> = c.into_iter().map(Interval::point).collect();
        let mut cert = Certificate::from_jacobi(
            CertificateKind::Lp,
            Direction::Lower,
            problem.space,
            problem.kernel.clone(),
            Vec::new(),
            jac,
        )?;
        if cert.verify_in_place(None)? == Verdict::Verified || eps * 10.0 > EPS_CAP * 1.0001 {
            return Ok((cert, eps));
        }
        eps *= 10.0;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub certificate: Certificate,
    pub raw_value: f64,
    pub epsilon: f64,
    pub rounds: usize,
    pub grid_size: usize,
}

/// Default degree: 6 below `p = 7`, 8 from there on.
pub fn default_degree(p: f64) -> usize {
    if p < 7.0 {
        6
    } else {
        8
    }
}

pub fn lp_lower_bound(space: SpaceDescriptor, kernel: &Kernel, degree: usize) -> Result<Certificate> {
    Ok(lp_lower_bound_with(space, kernel, degree, None)?.certificate)
}

/// As [`lp_lower_bound`], optionally with a Chebyshev grid of `grid` points in place of `4D`.
pub fn lp_lower_bound_with(space: SpaceDescriptor, kernel: &Kernel, degree: usize, grid: Option<usize>) -> Result<LpOutcome> {
    let mut problem = match grid {
        None => LpProblem::new(space, kernel.clone(), degree)?,
        Some(n) => {
            let mut p = LpProblem::with_grid(space, kernel.clone(), degree, chebyshev_extrema(n))?;
            p.add_points(&catalog_hints(&space));
            p
        }
    };
    let refined = solve_with_cuts(&mut problem)?;
    let (certificate, epsilon) = rigorize(&refined.raw, &problem)?;
    Ok(LpOutcome {
        certificate,
        raw_value: refined.raw.value,
        epsilon,
        rounds: refined.rounds,
        grid_size: refined.grid_size,
    })
}

/// Printed LP lower bounds on `RP^{d−1}` for `p = 3, 5, 7`, by `d`.
pub const LP_BOUND_GOLDENS: [(usize, [f64; 3]); 22] = [
    (3, [0.2412, 0.1655, 0.1248]),
    (4, [0.1612, 0.09607, 0.06454]),
    (5, [0.1170, 0.06169, 0.03740]),
    (6, [0.08970, 0.04240, 0.02344]),
    (7, [0.07142, 0.03060, 0.01556]),
    (8, [0.05852, 0.02291, 0.01080]),
    (9, [0.04902, 0.01770, 0.007768]),
    (10, [0.04180, 0.01401, 0.005750]),
    (11, [0.03616, 0.01131, 0.004360]),
    (12, [0.03166, 0.009290, 0.003375]),
    (13, [0.02801, 0.007737, 0.002658]),
    (14, [0.02499, 0.006524, 0.002125]),
    (15, [0.02248, 0.005561, 0.001721]),
    (16, [0.02035, 0.004785, 0.001413]),
    (17, [0.01853, 0.004152, 0.001171]),
    (18, [0.01696, 0.003630, 0.0009813]),
    (19, [0.01559, 0.003195, 0.0008280]),
    (20, [0.01440, 0.002830, 0.0007054]),
    (21, [0.01335, 0.002520, 0.0006047]),
    (22, [0.01242, 0.002256, 0.0005217]),
    (23, [0.01159, 0.002028, 0.0004529]),
    (24, [0.01085, 0.001832, 0.0003952]),
];

pub const LP_BOUND_EXPONENTS: [f64; 3] = [3.0, 5.0, 7.0];

/// Tolerance below a printed bound that a certified bound may fall.
pub const LP_BOUND_TOL: f64 = 5e-5;

/// Conjectured optimizer energies next to LP bounds at one odd exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonRow {
    pub entry: &'static str,
    pub p: f64,
    pub energy: f64,
    pub bound: f64,
}

pub const COMPARISON_ROWS: [ComparisonRow; 10] = [
    ComparisonRow { entry: "ico-dodeca-16", p: 7.0, energy: 0.1249, bound: 0.1248 },
    ComparisonRow { entry: "24-cell", p: 5.0, energy: 0.09628, bound: 0.09607 },
    ComparisonRow { entry: "hemicube-5", p: 3.0, energy: 0.1183, bound: 0.1170 },
    ComparisonRow { entry: "stroud-41", p: 5.0, energy: 0.06184, bound: 0.06169 },
    ComparisonRow { entry: "cp-hemicube-6", p: 3.0, energy: 0.09056, bound: 0.08970 },
    ComparisonRow { entry: "e6-63", p: 5.0, energy: 0.04249, bound: 0.04240 },
    ComparisonRow { entry: "e7-91", p: 5.0, energy: 0.03065, bound: 0.03060 },
    ComparisonRow { entry: "simplex-midpoints-8", p: 3.0, energy: 0.05910, bound: 0.05852 },
    ComparisonRow { entry: "c3-21", p: 5.0, energy: 0.1261, bound: 0.1258 },
    ComparisonRow { entry: "85-code", p: 5.0, energy: 0.04200, bound: 0.04184 },
];

pub fn rp(d: usize) -> SpaceDescriptor {
    SpaceDescriptor { field: Field::R, d, kind: Kind::Projective }
}

/// Rounds to `sig` significant figures.
pub fn round_sig(x: f64, sig: i32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = x.abs().log10().floor() as i32;
    let s = 10f64.powi(sig - 1 - e);
    (x * s).round() / s
}

/// Truncates toward zero to `sig` significant figures; printed lower bounds are truncated.
pub fn truncate_sig(x: f64, sig: i32) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let e = x.abs().log10().floor() as i32;
    let s = 10f64.powi(sig - 1 - e);
    // guard against representation error just below a printed digit
    ((x * s) * (1.0 + 1e-12)).trunc() / s
}

/// Energy of a catalog entry with class weights re-optimized for `kernel`.
pub fn entry_energy(entry: &CatalogEntry, kernel: &Kernel) -> Result<f64> {
    if entry.metadata_only {
        return entry.energy_from_multiplicities(kernel);
    }
    let config = catalog_get(&entry.name)?;
    let classes = config.classes.iter().max().map_or(0, |m| m + 1);
    if classes > 1 {
        energy_value(&optimize_class_weights(&config, kernel)?, kernel)
    } else {
        energy_value(&config, kernel)
    }
}

/// Lowest energy among catalog entries in `space` (including the orthonormal basis).
pub fn best_catalog_energy(space: &SpaceDescriptor, kernel: &Kernel) -> Result<Option<(String, f64)>> {
    let mut names = catalog_names();
    let basis = match space.field {
        Field::R => format!("orthobasis-{}", space.d),
        Field::C => format!("orthobasis-c-{}", space.d),
        Field::H => format!("orthobasis-h-{}", space.d),
    };
    names.push(basis);
    let found: Vec<(String, f64)> = names
        .par_iter()
        .filter_map(|n| catalog_entry(n).ok())
        .filter(|e| e.space == *space)
        .map(|e| Ok((e.name.clone(), entry_energy(&e, kernel)?)))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().min_by(|a, b| a.1.total_cmp(&b.1)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpCell {
    pub d: usize,
    pub p: f64,
    pub degree: usize,
    pub printed: f64,
    pub raw: f64,
    pub certified: f64,
    pub verdict: Verdict,
    pub pass: bool,
}

/// Recomputes the printed LP table for `d` in `dims`; cells run in parallel.
pub fn lp_table(dims: std::ops::RangeInclusive<usize>) -> Result<Vec<LpCell>> {
    let jobs: Vec<(usize, f64, f64)> = LP_BOUND_GOLDENS
        .iter()
        .filter(|(d, _)| dims.contains(d))
        .flat_map(|(d, row)| LP_BOUND_EXPONENTS.iter().zip(row).map(move |(p, v)| (*d, *p, *v)))
        .collect();
    jobs.par_iter()
        .map(|&(d, p, printed)| {
            let degree = default_degree(p);
            let out = lp_lower_bound_with(rp(d), &Kernel::pframe(p)?, degree, None)?;
            let certified = out.certificate.rigorous_bound();
            let verdict = out.certificate.verdict;
            let pass = verdict == Verdict::Verified && certified >= printed - LP_BOUND_TOL;
            Ok(LpCell { d, p, degree, printed, raw: out.raw_value, certified, verdict, pass })
        })
        .collect()
}
