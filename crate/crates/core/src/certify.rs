//! Optimality certificates: construction and independent interval verification.
//!
//! A lower-bound certificate is a polynomial `h = Σ ĥ_n C_n` with `ĥ_n ≥ 0` for `n ≥ 1`
//! and `h ≤ f + slack` on `[−1, 1]`; every probability measure then has
//! `I_f(μ) ≥ ĥ_0 − slack`. The Jacobi coefficients are the primary data; the
//! power form is recomputed from them in interval arithmetic.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::configurations::{
    catalog_get, design_strength, distance_set, tightness_check, Tightness, WeightedConfiguration,
};
use crate::energy::energy_value;
use crate::error::{Error, Result};
use crate::exact::{rat_interval, Surd};
use crate::hermite::{hermite_interpolant, sweep_nonneg, KernelMinusPoly, NodeSystem, SweepVerdict, SWEEP_DEPTH};
use crate::interval::Interval;
use crate::jacobi::{JacobiBasis, JacobiExpansion};
use crate::kernels::{pframe_derivative_interval, pframe_dp_derivative_interval, Kernel, Monotonicity};
use crate::polynomial::Poly;
use crate::spaces::{Field, Kind, SpaceDescriptor, UnitVector};

/// Tolerance granted to `h ≤ f` near contact points; deducted from the bound.
pub const SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Tight,
    Cell600,
    Causal,
    Moment,
    Lp,
}

/// `Lower`: `h ≤ f`, positive definite, bound from below. `Upper`: `h ≥ f` under moment constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Check {
    Passed,
    Failed(String),
    Inconclusive(String),
    NotApplicable(String),
}

impl Check {
    fn ok(&self) -> bool {
        matches!(self, Check::Passed | Check::NotApplicable(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub h_leq_f: Check,
    pub positive_definite: Check,
    pub interpolation_match: Check,
    pub design_strength_sufficient: Check,
}

impl Checks {
    fn all(&self) -> [&Check; 4] {
        [&self.h_leq_f, &self.positive_definite, &self.interpolation_match, &self.design_strength_sufficient]
    }

    pub fn verdict(&self) -> Verdict {
        if self.all().iter().any(|c| matches!(c, Check::Failed(_))) {
            Verdict::Falsified
        } else if self.all().iter().all(|c| c.ok()) {
            Verdict::Verified
        } else {
            Verdict::Inconclusive
        }
    }

    fn pending() -> Checks {
        let p = || Check::Inconclusive("not run".into());
        Checks { h_leq_f: p(), positive_definite: p(), interpolation_match: p(), design_strength_sufficient: p() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Falsified,
    Inconclusive,
}

impl Verdict {
    /// CLI exit status.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Falsified => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Falsified => "falsified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub direction: Direction,
    pub space: SpaceDescriptor,
    pub kernel: Kernel,
    /// Interpolation nodes, repeated by multiplicity.
    pub nodes: Vec<Surd>,
    pub h_power: Vec<Interval>,
    pub h_jacobi: Vec<Interval>,
    /// Enclosure of `ĥ_0`.
    pub bound: Interval,
    pub slack: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<String>,
    /// Number of vanishing moment constraints for `Upper` certificates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_order: Option<usize>,
    pub checks: Checks,
    pub verdict: Verdict,
}

impl Certificate {
    /// Assembles a certificate from interval Jacobi coefficients; checks are left pending.
    pub fn from_jacobi(
        kind: CertificateKind,
        direction: Direction,
        space: SpaceDescriptor,
        kernel: Kernel,
        nodes: Vec<Surd>,
        h_jacobi: Vec<Interval>,
    ) -> Result<Certificate> {
        let h_power = power_form(&space, &h_jacobi)?.c;
        let bound = h_jacobi.first().copied().unwrap_or(Interval::ZERO);
        Ok(Certificate {
            kind,
            direction,
            space,
            kernel,
            nodes,
            h_power,
            h_jacobi,
            bound,
            slack: SLACK,
            configuration: None,
            moment_order: None,
            checks: Checks::pending(),
            verdict: Verdict::Inconclusive,
        })
    }

    /// The proven bound: `ĥ_0 − slack` from below, or `ĥ_0 + slack` from above.
    pub fn rigorous_bound(&self) -> f64 {
        match self.direction {
            Direction::Lower => (self.bound - Interval::point(self.slack)).lo(),
            Direction::Upper => (self.bound + Interval::point(self.slack)).hi(),
        }
    }

    pub fn degree(&self) -> usize {
        self.h_jacobi.iter().rposition(|c| *c != Interval::ZERO).unwrap_or(0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(s)?)
    }

    /// Re-runs all checks and stores the outcome.
    pub fn verify_in_place(&mut self, config: Option<&WeightedConfiguration>) -> Result<Verdict> {
        let checks = verify_certificate(self, config)?;
        self.verdict = checks.verdict();
        self.checks = checks;
        Ok(self.verdict)
    }
}

fn power_form(space: &SpaceDescriptor, h_jacobi: &[Interval]) -> Result<Poly<Interval>> {
    let (alpha, beta) = space.params();
    JacobiExpansion { alpha, beta, coeffs: h_jacobi.to_vec() }.to_power()
}

fn jacobi_form(space: &SpaceDescriptor, h: &Poly<Interval>) -> Result<Vec<Interval>> {
    let (alpha, beta) = space.params();
    Ok(JacobiBasis::new(&alpha, &beta, h.degree())?.expand(h)?.coeffs)
}

/// Lower ends that are negative only by rounding are raised to zero; the sweep then
/// runs on the clipped family, so nothing unproven is assumed.
fn clip_rounding(mut c: Vec<Interval>) -> Vec<Interval> {
    for x in c.iter_mut().skip(1) {
        if x.lo() < 0.0 && x.hi() >= 0.0 && x.lo() > -1e-12 {
            *x = Interval::new(0.0, x.hi());
        }
    }
    c
}

/// Re-runs the four checks from the certificate data alone.
pub fn verify_certificate(cert: &Certificate, config: Option<&WeightedConfiguration>) -> Result<Checks> {
    cert.space.validate()?;
    cert.kernel.validate()?;
    cert.kernel.check_space(&cert.space)?;
    let h = power_form(&cert.space, &cert.h_jacobi)?;
    for (k, c) in cert.h_power.iter().enumerate() {
        if !c.overlaps(&h.coeff(k)) && (c.mid() - h.coeff(k).mid()).abs() > 1e-9 * (1.0 + c.mag()) {
            return Err(Error::Parse(format!("power coefficient {k} disagrees with the Jacobi coefficients")));
        }
    }
    let h_leq_f = {
        let reversed = cert.direction == Direction::Upper;
        let phi = KernelMinusPoly::new(&cert.kernel, &h, reversed);
        match sweep_nonneg(&phi, Interval::new(-1.0, 1.0), cert.slack, SWEEP_DEPTH)? {
            SweepVerdict::Holds { .. } => Check::Passed,
            SweepVerdict::Fails { at, value } => Check::Failed(format!("f - h = {value} at t = {at}")),
            SweepVerdict::Inconclusive { cells } => {
                Check::Inconclusive(format!("{} cells undecided, first {}", cells.len(), cells[0]))
            }
        }
    };
    let positive_definite = match cert.direction {
        Direction::Upper => Check::NotApplicable("upper bounds use the moment constraints instead".into()),
        Direction::Lower => match cert.h_jacobi.iter().enumerate().skip(1).find(|(_, c)| !c.is_nonneg()) {
            None => Check::Passed,
            Some((n, c)) if c.hi() < 0.0 => Check::Failed(format!("coefficient {n} is {c}")),
            Some((n, c)) => Check::Inconclusive(format!("coefficient {n} = {c} straddles 0")),
        },
    };
    let interpolation_match = interpolation_check(cert, &h);
    let design_strength_sufficient = match config {
        None => Check::NotApplicable("no configuration attached".into()),
        Some(c) => design_check(cert, c)?,
    };
    Ok(Checks { h_leq_f, positive_definite, interpolation_match, design_strength_sufficient })
}

fn interpolation_check(cert: &Certificate, h: &Poly<Interval>) -> Check {
    if cert.nodes.is_empty() {
        return Check::NotApplicable("no interpolation nodes".into());
    }
    let nodes = match NodeSystem::new(cert.nodes.clone()) {
        Ok(n) => n,
        Err(e) => return Check::Failed(e.to_string()),
    };
    for (s, k) in nodes.distinct() {
        let si = s.to_interval();
        for j in 0..k {
            let hv = h.nth_derivative(j).range(si);
            let fv = match cert.kernel.derivative_interval(si, j) {
                Ok(v) => v,
                Err(e) => return Check::Failed(format!("f^({j}) at {s}: {e}")),
            };
            let gap = (hv - fv).mag();
            if !(gap <= 1e-9 * (1.0 + fv.mag())) {
                return Check::Failed(format!("h^({j})({s}) = {hv} but f^({j}) = {fv}"));
            }
        }
    }
    Check::Passed
}

/// The configuration's moments vanish wherever `ĥ_n ≠ 0`, its distances are nodes, and its energy equals `ĥ_0`.
fn design_check(cert: &Certificate, config: &WeightedConfiguration) -> Result<Check> {
    if config.space != cert.space {
        return Ok(Check::Failed(format!("configuration lives in {}, certificate in {}", config.space, cert.space)));
    }
    let deg = cert.degree();
    if let (Direction::Upper, Some(k)) = (cert.direction, cert.moment_order) {
        if deg > k {
            return Ok(Check::Failed(format!("degree {deg} exceeds the {k} moment constraints")));
        }
    }
    let st = design_strength(config, deg.max(1));
    for n in 1..=deg {
        if cert.h_jacobi[n] != Interval::ZERO && st.residuals[n - 1].abs() > 1e-10 {
            return Ok(Check::Failed(format!("moment {n} is {:e} while h has a degree-{n} component", st.residuals[n - 1])));
        }
    }
    if !cert.nodes.is_empty() {
        let nodes: Vec<f64> = cert.nodes.iter().map(Surd::to_f64).collect();
        if let Some(t) = distance_set(config).values.iter().find(|t| nodes.iter().all(|s| (*t - s).abs() > 1e-9)) {
            return Ok(Check::Failed(format!("distance {t} is not an interpolation node")));
        }
    }
    let e = energy_value(config, &cert.kernel)?;
    if (e - cert.bound.mid()).abs() > 1e-10 {
        return Ok(Check::Failed(format!("energy {e} differs from the bound {}", cert.bound)));
    }
    Ok(Check::Passed)
}

/// Exact interior distances of a configuration.
fn exact_distances(config: &WeightedConfiguration) -> Result<Vec<Surd>> {
    distance_set(config)
        .values
        .iter()
        .map(|&t| {
            Surd::recognize(t, 1e-9)
                .filter(|s| (s.to_f64() - t).abs() < 1e-11)
                .ok_or_else(|| Error::Numerical(format!("distance {t} is not a recognizable quadratic surd")))
        })
        .collect()
}

/// Nodes for a tight `M`-design: interior distances doubled and `1` simple; for odd `M`
/// also `−1` simple.
fn tight_nodes(config: &WeightedConfiguration, m: usize) -> Result<NodeSystem> {
    let one = Surd::int(1);
    let minus = Surd::int(-1);
    let mut nodes = Vec::new();
    for s in exact_distances(config)? {
        if s == one || (m % 2 == 1 && s == minus) {
            nodes.push(s);
        } else {
            nodes.push(s.clone());
            nodes.push(s);
        }
    }
    NodeSystem::new(nodes)
}

fn falling(x: f64, k: usize) -> f64 {
    (0..k).map(|i| x - i as f64).product()
}

/// Hermite certificate `h = H[f, g]` at the distances of a tight design.
pub fn build_tight_certificate(config: &WeightedConfiguration, kernel: &Kernel) -> Result<Certificate> {
    kernel.validate()?;
    kernel.check_space(&config.space)?;
    let m = match tightness_check(config) {
        Tightness::Tight(m) => m,
        t => return Err(Error::NotTight(format!("tightness check returned {t:?}"))),
    };
    let nodes = tight_nodes(config, m)?;
    let d = nodes.len();
    let Kernel::PFrame { p } = kernel else {
        return Err(Error::Unsupported(format!("tight certificates need a p-frame kernel, got {kernel}")));
    };
    let enough = match kernel.abs_monotonic_degree()? {
        Monotonicity::Degree(deg) => deg + 1 >= d,
        Monotonicity::Polynomial => true,
    };
    if !enough || falling(p / 2.0, d) > 0.0 {
        return Err(Error::Constraint(format!(
            "p = {p} is not absolutely monotonic to degree {} with a nonpositive next derivative",
            d - 1
        )));
    }
    let h = hermite_interpolant(kernel, &nodes)?;
    let jac = clip_rounding(jacobi_form(&config.space, &h)?);
    let mut cert = Certificate::from_jacobi(
        CertificateKind::Tight,
        Direction::Lower,
        config.space,
        kernel.clone(),
        nodes.nodes().to_vec(),
        jac,
    )?;
    cert.verify_in_place(Some(config))?;
    Ok(cert)
}

/// Tight certificate for a catalog entry, recording its name.
pub fn tight_certificate_for(name: &str, p: f64) -> Result<Certificate> {
    let config = catalog_get(name)?;
    let mut cert = build_tight_certificate(&config, &Kernel::pframe(p)?)?;
    cert.configuration = Some(name.to_string());
    Ok(cert)
}

/// Upper certificate for `max I_{C_{k+1}}(μ)` subject to `I_{C_j}(μ) = 0`, `1 ≤ j ≤ k`.
pub fn moment_certificate(config: &WeightedConfiguration) -> Result<Certificate> {
    let k = match tightness_check(config) {
        Tightness::Tight(k) => k,
        t => return Err(Error::NotTight(format!("tightness check returned {t:?}"))),
    };
    let (alpha, beta) = config.space.params();
    let basis = JacobiBasis::new(&alpha, &beta, k + 1)?;
    let kernel = Kernel::Poly { coeffs: basis.poly(k + 1).to_surd().c };
    let nodes = tight_nodes(config, k)?;
    let h = hermite_interpolant(&kernel, &nodes)?;
    let jac = jacobi_form(&config.space, &h)?;
    let mut cert =
        Certificate::from_jacobi(CertificateKind::Moment, Direction::Upper, config.space, kernel, nodes.nodes().to_vec(), jac)?;
    cert.moment_order = Some(k);
    cert.verify_in_place(Some(config))?;
    Ok(cert)
}

// ---------------------------------------------------------------------------
// 600-cell

/// Jacobi degrees carried by the 600-cell polynomial (degree 6 is excluded).
pub const CELL600_DEGREES: [usize; 8] = [0, 1, 2, 3, 4, 5, 7, 8];

fn cell600_space() -> SpaceDescriptor {
    SpaceDescriptor { field: Field::R, d: 4, kind: Kind::Projective }
}

/// `(node, derivative order)` for the eight conditions.
fn cell600_conditions() -> Vec<(Surd, usize)> {
    let t2: Surd = "-1/4-1/4*sqrt(5)".parse().expect("surd");
    let t4: Surd = "-1/4+1/4*sqrt(5)".parse().expect("surd");
    let half = Surd::frac(-1, 2);
    vec![
        (Surd::int(-1), 0),
        (t2.clone(), 0),
        (half.clone(), 0),
        (t4.clone(), 0),
        (Surd::int(1), 0),
        (t2, 1),
        (half, 1),
        (t4, 1),
    ]
}

fn cell600_nodes() -> Vec<Surd> {
    let mut v: Vec<Surd> = cell600_conditions().into_iter().map(|(s, _)| s).collect();
    v.sort();
    v
}

/// The interpolation system `A ĥ = b(p)` with a rigorous inverse bound.
struct Cell600System {
    basis: JacobiBasis,
    r: Vec<Vec<Interval>>,
    /// `δ/(1 − δ)` with `δ ≥ ‖I − R A‖_∞`.
    inflate: f64,
}

impl Cell600System {
    fn new() -> Result<Self> {
        let (alpha, beta) = cell600_space().params();
        let basis = JacobiBasis::new(&alpha, &beta, 8)?;
        let conds = cell600_conditions();
        let a: Vec<Vec<Interval>> = conds
            .iter()
            .map(|(s, k)| {
                CELL600_DEGREES.iter().map(|&n| basis.poly(n).to_surd().nth_derivative(*k).eval(s).to_interval()).collect()
            })
            .collect();
        let am = DMatrix::from_fn(8, 8, |i, j| a[i][j].mid());
        let rm = am.try_inverse().ok_or_else(|| Error::Singular("600-cell interpolation system".into()))?;
        let r: Vec<Vec<Interval>> = (0..8).map(|i| (0..8).map(|j| Interval::point(rm[(i, j)])).collect()).collect();
        let mut delta = 0.0f64;
        for i in 0..8 {
            let mut row = Interval::ZERO;
            for j in 0..8 {
                let mut e = if i == j { Interval::ONE } else { Interval::ZERO };
                for l in 0..8 {
                    e = e - r[i][l] * a[l][j];
                }
                row = row + Interval::point(e.mag());
            }
            delta = delta.max(row.hi());
        }
        if delta >= 0.5 {
            return Err(Error::Numerical(format!("600-cell system too ill-conditioned (delta = {delta})")));
        }
        let inflate = (Interval::point(delta) / (Interval::ONE - Interval::point(delta))).hi();
        Ok(Cell600System { basis, r, inflate })
    }

    /// Encloses `A⁻¹ b` for every `b` in the interval vector.
    fn solve(&self, b: &[Interval]) -> Vec<Interval> {
        let y: Vec<Interval> = self.r.iter().map(|row| row.iter().zip(b).map(|(r, b)| *r * *b).sum()).collect();
        let norm = y.iter().map(|v| v.mag()).fold(0.0, f64::max);
        let rho = (Interval::point(self.inflate) * Interval::point(norm)).hi();
        y.into_iter().map(|v| v + Interval::new(-rho, rho)).collect()
    }

    fn rhs(&self, p: Interval, dp: bool) -> Result<Vec<Interval>> {
        cell600_conditions()
            .iter()
            .map(|(s, k)| {
                if *s == Surd::int(-1) {
                    return Ok(Interval::ZERO);
                }
                let t = s.to_interval();
                if dp {
                    pframe_dp_derivative_interval(p, t, *k)
                } else {
                    pframe_derivative_interval(p, t, *k)
                }
            })
            .collect()
    }

    /// Exact coefficients at even `p = 2k`, where the interpolant is `f` itself.
    fn exact_at_even(&self, p: f64) -> Option<Vec<Interval>> {
        let f = Kernel::PFrame { p }.exact_polynomial()?;
        let e = self.basis.expand(&f).ok()?;
        Some(CELL600_DEGREES.iter().map(|&n| rat_interval(&e.coeff(n))).collect())
    }

    fn at_point(&self, p: f64) -> Result<Vec<Interval>> {
        if let Some(x) = self.exact_at_even(p) {
            return Ok(x);
        }
        Ok(self.solve(&self.rhs(Interval::point(p), false)?))
    }

    /// `ĥ(P) ⊆ ĥ(p₀) + ĥ'(P)(P − p₀)`, anchored at an even endpoint when there is one.
    fn over(&self, p: Interval) -> Result<Vec<Interval>> {
        if p.is_point() {
            return self.at_point(p.lo());
        }
        let p0 = if self.exact_at_even(p.lo()).is_some() {
            p.lo()
        } else if self.exact_at_even(p.hi()).is_some() {
            p.hi()
        } else {
            p.mid()
        };
        let x0 = self.at_point(p0)?;
        let dx = self.solve(&self.rhs(p, true)?);
        let step = p - Interval::point(p0);
        Ok(x0.iter().zip(&dx).map(|(a, b)| *a + *b * step).collect())
    }
}

fn full_coefficients(x: &[Interval]) -> Vec<Interval> {
    let mut c = vec![Interval::ZERO; 9];
    for (v, &n) in x.iter().zip(CELL600_DEGREES.iter()) {
        c[n] = *v;
    }
    c
}

/// The polynomial `h = Σ_{n ≤ 8, n ≠ 6} ĥ_n C_n` matching `f` at the 600-cell distances and
/// `f'` at the interior ones.
pub fn build_600cell_certificate(p: f64) -> Result<Certificate> {
    if !(8.0..=10.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("the 600-cell certificate needs p in [8, 10], got {p}")));
    }
    let sys = Cell600System::new()?;
    let coeffs = clip_rounding(full_coefficients(&sys.at_point(p)?));
    let mut cert = Certificate::from_jacobi(
        CertificateKind::Cell600,
        Direction::Lower,
        cell600_space(),
        Kernel::pframe(p)?,
        cell600_nodes(),
        coeffs,
    )?;
    cert.configuration = Some("600-cell".into());
    let config = catalog_get("600-cell")?;
    cert.verify_in_place(Some(&config))?;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeCell {
    pub p: Interval,
    pub min_lower: f64,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub p_lo: f64,
    pub p_hi: f64,
    /// Leaves of the bisection tree over `p`.
    pub cells: Vec<RangeCell>,
    /// Full certificate verification at sample exponents.
    pub samples: Vec<(f64, Verdict)>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offending: Option<Interval>,
}

/// Depth cap for the bisection over `p`.
pub const RANGE_DEPTH: u32 = 24;

/// Proves `ĥ_n(p) ≥ 0` for all `p ∈ [p_lo, p_hi]` by bisection, and fully verifies the
/// certificate at sample exponents including both ends.
pub fn certify_600cell_range(p_lo: f64, p_hi: f64) -> Result<RangeReport> {
    if !(8.0 <= p_lo && p_lo <= p_hi && p_hi <= 10.0) {
        return Err(Error::InvalidParameter(format!("range [{p_lo}, {p_hi}] is not inside [8, 10]")));
    }
    let sys = Cell600System::new()?;
    let mut cells = Vec::new();
    let mut stack = vec![(Interval::new(p_lo, p_hi), 0u32)];
    let mut verdict = Verdict::Verified;
    let mut offending = None;
    while let Some((p, depth)) = stack.pop() {
        let x = sys.over(p)?;
        let min_lower = x.iter().map(|c| c.lo()).fold(f64::INFINITY, f64::min);
        if min_lower >= 0.0 {
            cells.push(RangeCell { p, min_lower, certified: true });
            continue;
        }
        let mid = sys.at_point(p.mid())?;
        if mid.iter().any(|c| c.hi() < 0.0) {
            cells.push(RangeCell { p, min_lower, certified: false });
            verdict = Verdict::Falsified;
            offending = Some(p);
            break;
        }
        if depth >= RANGE_DEPTH {
            cells.push(RangeCell { p, min_lower, certified: false });
            verdict = Verdict::Inconclusive;
            offending.get_or_insert(p);
            continue;
        }
        let (a, b) = p.split();
        stack.push((b, depth + 1));
        stack.push((a, depth + 1));
    }
    cells.sort_by(|a, b| a.p.lo().total_cmp(&b.p.lo()));
    let n = if p_lo == p_hi { 1 } else { 5 };
    let mut samples = Vec::new();
    for i in 0..n {
        let p = if n == 1 { p_lo } else { p_lo + (p_hi - p_lo) * i as f64 / (n - 1) as f64 };
        let v = build_600cell_certificate(p)?.verdict;
        if v != Verdict::Verified && verdict == Verdict::Verified {
            verdict = v;
        }
        samples.push((p, v));
    }
    Ok(RangeReport { p_lo, p_hi, cells, samples, verdict, offending })
}

// ---------------------------------------------------------------------------
// Causal variational certificates on S²

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCase {
    CrossPolytope,
    Icosahedron,
}

impl FromStr for CausalCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cross_polytope" | "cross-polytope" => Ok(CausalCase::CrossPolytope),
            "icosahedron" => Ok(CausalCase::Icosahedron),
            _ => Err(Error::Parse(format!("unknown causal case {s}; expected cross-polytope or icosahedron"))),
        }
    }
}

fn s2() -> SpaceDescriptor {
    SpaceDescriptor { field: Field::R, d: 3, kind: Kind::Sphere }
}

/// The uniform measure on the six cross-polytope or twelve icosahedron vertices of `S²`.
pub fn causal_measure(case: CausalCase) -> Result<WeightedConfiguration> {
    let mut pts: Vec<[f64; 3]> = Vec::new();
    match case {
        CausalCase::CrossPolytope => {
            for i in 0..3 {
                for s in [1.0, -1.0] {
                    let mut v = [0.0; 3];
                    v[i] = s;
                    pts.push(v);
                }
            }
        }
        CausalCase::Icosahedron => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            for a in [1.0, -1.0] {
                for b in [phi, -phi] {
                    pts.push([0.0, a, b]);
                    pts.push([a, b, 0.0]);
                    pts.push([b, 0.0, a]);
                }
            }
        }
    }
    let points = pts.iter().map(|v| UnitVector::from_real(v)).collect::<Result<Vec<_>>>()?;
    WeightedConfiguration::uniform(s2(), points)
}

/// Kernel and auxiliary polynomial of each causal case.
pub fn causal_data(case: CausalCase) -> (Kernel, Vec<Surd>, Vec<Surd>) {
    let s = |x: &str| -> Surd { x.parse().expect("surd") };
    match case {
        CausalCase::CrossPolytope => (
            Kernel::Causal { tau_sq: Surd::int(2), normalized: false },
            vec![Surd::int(0), Surd::int(8), Surd::int(8)],
            vec![Surd::int(-1), Surd::int(0), Surd::int(1)],
        ),
        CausalCase::Icosahedron => (
            Kernel::Causal { tau_sq: s("5/2+1/2*sqrt(5)"), normalized: true },
            vec![s("1/32-1/32*sqrt(5)"), s("-1/8"), s("-5/16+3/16*sqrt(5)"), s("5/8"), s("25/32-5/32*sqrt(5)")],
            vec![s("-1"), s("-1/5*sqrt(5)"), s("-1/5*sqrt(5)"), s("1/5*sqrt(5)"), s("1")],
        ),
    }
}

/// Exact Legendre coefficients of the auxiliary polynomial.
pub fn causal_jacobi_exact(case: CausalCase) -> Result<Vec<Surd>> {
    let (_, h, _) = causal_data(case);
    let (alpha, beta) = s2().params();
    Ok(JacobiBasis::new(&alpha, &beta, h.len() - 1)?.expand(&Poly::new(h))?.coeffs)
}

pub fn causal_certificate(case: CausalCase) -> Result<Certificate> {
    let (kernel, _, nodes) = causal_data(case);
    let exact = causal_jacobi_exact(case)?;
    if let Some(c) = exact.iter().find(|c| c.signum() < 0) {
        return Err(Error::Numerical(format!("auxiliary polynomial has coefficient {c}")));
    }
    let jac: Vec<Interval> = exact.iter().map(Surd::to_interval).collect();
    let mut cert = Certificate::from_jacobi(CertificateKind::Causal, Direction::Lower, s2(), kernel, nodes, jac)?;
    cert.configuration = Some(
        match case {
            CausalCase::CrossPolytope => "cross-polytope vertices",
            CausalCase::Icosahedron => "icosahedron vertices",
        }
        .into(),
    );
    let config = causal_measure(case)?;
    cert.verify_in_place(Some(&config))?;
    Ok(cert)
}
