//! Confluent divided differences, Newton-form Hermite interpolation, and interval sweeps.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::interval::Interval;
use crate::kernels::{Kernel, Monotonicity};
use crate::polynomial::Poly;

/// Default bisection depth for interval sweeps.
pub const SWEEP_DEPTH: u32 = 40;
/// Cells narrower than this stop splitting.
pub const SWEEP_MIN_WIDTH: f64 = 1e-12;

/// Interpolation nodes `s_1 ≤ … ≤ s_D`, a node of multiplicity `k` appearing `k` times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeSystem {
    nodes: Vec<Surd>,
}

impl NodeSystem {
    pub fn new(mut nodes: Vec<Surd>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidParameter("a node system needs at least one node".into()));
        }
        if let Some(s) = nodes.iter().find(|s| **s < Surd::int(-1) || **s > Surd::int(1)) {
            return Err(Error::Domain(format!("node {s} lies outside [-1, 1]")));
        }
        nodes.sort();
        Ok(NodeSystem { nodes })
    }

    /// Builds from `(node, multiplicity)` pairs.
    pub fn with_multiplicities(pairs: &[(Surd, usize)]) -> Result<Self> {
        NodeSystem::new(pairs.iter().flat_map(|(s, k)| std::iter::repeat(s.clone()).take(*k)).collect())
    }

    pub fn nodes(&self) -> &[Surd] {
        &self.nodes
    }

    /// `D`, the number of interpolation conditions.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn distinct(&self) -> Vec<(Surd, usize)> {
        let mut m: BTreeMap<Surd, usize> = BTreeMap::new();
        for s in &self.nodes {
            *m.entry(s.clone()).or_default() += 1;
        }
        m.into_iter().collect()
    }

    pub fn multiplicity(&self, s: &Surd) -> usize {
        self.nodes.iter().filter(|x| *x == s).count()
    }

    /// `g_j(t) = Π_{i<j} (t − s_i)`.
    pub fn partial_product(&self, j: usize) -> Poly<Surd> {
        Poly::from_roots(&self.nodes[..j])
    }

    /// `g(t) = Π (t − s_j)`.
    pub fn annihilator(&self) -> Poly<Surd> {
        self.partial_product(self.nodes.len())
    }

    /// Exact test of `g ≤ 0` on `[−1, 1]`: interior nodes even, the node `1` odd.
    pub fn annihilator_nonpositive(&self) -> bool {
        let one = Surd::int(1);
        self.distinct().iter().all(|(s, k)| if *s == one { k % 2 == 1 } else { *s == Surd::int(-1) || k % 2 == 0 })
            && self.multiplicity(&one) > 0
    }

    /// Exact test of `g ≥ 0` on `[−1, 1]`.
    pub fn annihilator_nonnegative(&self) -> bool {
        let one = Surd::int(1);
        self.distinct().iter().all(|(s, k)| if *s == one { k % 2 == 0 } else { *s == Surd::int(-1) || k % 2 == 0 })
    }
}

/// Newton coefficients `f[s_1, …, s_{j+1}]`, where a `k`-fold node contributes `f^{(k)}(s)/k!`.
pub fn divided_differences(kernel: &Kernel, nodes: &NodeSystem) -> Result<Vec<Interval>> {
    let s = nodes.nodes();
    let d = s.len();
    let maxk = nodes.distinct().iter().map(|(_, k)| *k).max().unwrap_or(1);
    if maxk - 1 > kernel.max_derivative() {
        return Err(Error::InvalidParameter(format!("{kernel} has no derivative of order {}", maxk - 1)));
    }
    let si: Vec<Interval> = s.iter().map(Surd::to_interval).collect();
    // cache f^{(k)}(s)/k! per distinct node
    let mut taylor: BTreeMap<(usize, usize), Interval> = BTreeMap::new();
    let mut deriv = |i: usize, k: usize| -> Result<Interval> {
        let first = s.iter().position(|x| *x == s[i]).unwrap();
        if let Some(v) = taylor.get(&(first, k)) {
            return Ok(*v);
        }
        let v = kernel.derivative_interval(si[i], k).map_err(|e| match e {
            Error::Domain(m) => Error::Singular(format!("derivative {k} at node {}: {m}", s[i])),
            e => e,
        })?;
        if !(v.lo().is_finite() && v.hi().is_finite()) {
            return Err(Error::Singular(format!("derivative {k} at node {} is unbounded", s[i])));
        }
        let v = v / Interval::point(factorial(k));
        taylor.insert((first, k), v);
        Ok(v)
    };
    let mut dd: Vec<Interval> = (0..d).map(|i| deriv(i, 0)).collect::<Result<_>>()?;
    let mut out = vec![dd[0]];
    for j in 1..d {
        for i in (j..d).rev() {
            dd[i] = if s[i] == s[i - j] {
                deriv(i, j)?
            } else {
                (dd[i] - dd[i - 1]) / (s[i].clone() - s[i - j].clone()).to_interval()
            };
        }
        out.push(dd[j]);
    }
    Ok(out)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `H[f, g] = f(s_1) + Σ_j g_j(t) Q[f, g_j](s_{j+1})`, with interval coefficients.
pub fn hermite_interpolant(kernel: &Kernel, nodes: &NodeSystem) -> Result<Poly<Interval>> {
    let c = divided_differences(kernel, nodes)?;
    let mut h = Poly::<Interval>::zero();
    for (j, cj) in c.iter().enumerate() {
        h = h.add(&nodes.partial_product(j).to_interval().scale(cj));
    }
    Ok(h)
}

/// Outcome of an adaptive interval sweep for `φ ≥ −slack`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SweepVerdict {
    Holds { cells: usize },
    Fails { at: f64, value: Interval },
    Inconclusive { cells: Vec<Interval> },
}

impl SweepVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SweepVerdict::Holds { .. })
    }
}

/// Enclosure of `φ` on a cell: the naive bound intersected with the centered form
/// `φ(m) + φ'(X)(X − m)` when a derivative enclosure is available.
pub trait Enclosure: Sync {
    fn value(&self, t: Interval) -> Result<Interval>;
    fn slope(&self, _t: Interval) -> Option<Interval> {
        None
    }

    fn enclose(&self, t: Interval) -> Result<Interval> {
        let naive = self.value(t)?;
        let Some(dv) = self.slope(t) else { return Ok(naive) };
        let m = Interval::point(t.mid());
        let centered = self.value(m)? + dv * (t - m);
        Ok(naive.intersect(&centered).unwrap_or(naive))
    }
}

/// Proves `φ(t) ≥ −slack` on `domain` by bisection. A cell is accepted when its
/// enclosure has lower end `≥ −slack`; a midpoint with enclosure below `−slack` refutes.
pub fn sweep_nonneg<E: Enclosure>(phi: &E, domain: Interval, slack: f64, depth_cap: u32) -> Result<SweepVerdict> {
    let start: Vec<Interval> = {
        let n = 64;
        let w = domain.width() / n as f64;
        (0..n)
            .map(|i| {
                let lo = if i == 0 { domain.lo() } else { domain.lo() + w * i as f64 };
                let hi = if i == n - 1 { domain.hi() } else { domain.lo() + w * (i + 1) as f64 };
                Interval::new(lo, hi)
            })
            .collect()
    };
    let start = if domain.width() == 0.0 { vec![domain] } else { start };
    let results: Vec<Result<(usize, Vec<Interval>, Option<(f64, Interval)>)>> =
        start.into_par_iter().map(|cell| sweep_cell(phi, cell, slack, depth_cap.saturating_sub(6))).collect();
    let mut cells = 0;
    let mut open = Vec::new();
    for r in results {
        let (c, o, fail) = r?;
        if let Some((at, value)) = fail {
            return Ok(SweepVerdict::Fails { at, value });
        }
        cells += c;
        open.extend(o);
    }
    Ok(if open.is_empty() { SweepVerdict::Holds { cells } } else { SweepVerdict::Inconclusive { cells: open } })
}

type CellResult = (usize, Vec<Interval>, Option<(f64, Interval)>);

fn sweep_cell<E: Enclosure>(phi: &E, cell: Interval, slack: f64, depth_cap: u32) -> Result<CellResult> {
    let mut stack = vec![(cell, 0u32)];
    let mut done = 0;
    let mut open = Vec::new();
    while let Some((c, depth)) = stack.pop() {
        let v = phi.enclose(c)?;
        if v.lo() >= -slack {
            done += 1;
            continue;
        }
        let m = Interval::point(c.mid());
        let vm = phi.value(m)?;
        if vm.hi() < -slack {
            return Ok((done, open, Some((c.mid(), vm))));
        }
        if depth >= depth_cap || c.width() < SWEEP_MIN_WIDTH {
            open.push(c);
            continue;
        }
        let (a, b) = c.split();
        stack.push((b, depth + 1));
        stack.push((a, depth + 1));
    }
    Ok((done, open, None))
}

/// `f − p` for a kernel `f` and interval polynomial `p`. Polynomial kernels are
/// subtracted coefficientwise first.
pub struct KernelMinusPoly<'a> {
    pub kernel: &'a Kernel,
    pub poly: &'a Poly<Interval>,
    dpoly: Poly<Interval>,
    /// `(domain, f − p, (f − p)')` for piecewise polynomial kernels.
    pieces: Option<Vec<(Interval, Poly<Interval>, Poly<Interval>)>>,
    /// When set, `p − f` instead.
    pub reversed: bool,
}

impl<'a> KernelMinusPoly<'a> {
    pub fn new(kernel: &'a Kernel, poly: &'a Poly<Interval>, reversed: bool) -> Self {
        let pieces = kernel.polynomial_pieces().map(|ps| {
            ps.into_iter()
                .map(|(dom, f)| {
                    let d = f.sub(poly);
                    let d = if reversed { d.scale(&Interval::point(-1.0)) } else { d };
                    let dd = d.derivative();
                    (dom, d, dd)
                })
                .collect()
        });
        KernelMinusPoly { kernel, poly, dpoly: poly.derivative(), pieces, reversed }
    }
}

/// Naive range intersected with the centered form, or the endpoint hull when monotone.
fn poly_enclosure(d: &Poly<Interval>, dd: &Poly<Interval>, t: Interval) -> Interval {
    let naive = d.range(t);
    let slope = dd.range(t);
    let lo = Interval::point(t.lo());
    let hi = Interval::point(t.hi());
    if slope.lo() >= 0.0 {
        return d.range(lo).hull(&d.range(hi)).intersect(&naive).unwrap_or(naive);
    }
    if slope.hi() <= 0.0 {
        return d.range(hi).hull(&d.range(lo)).intersect(&naive).unwrap_or(naive);
    }
    let m = Interval::point(t.mid());
    let centered = d.range(m) + slope * (t - m);
    naive.intersect(&centered).unwrap_or(naive)
}

impl Enclosure for KernelMinusPoly<'_> {
    fn value(&self, t: Interval) -> Result<Interval> {
        if let Some(ps) = &self.pieces {
            return piecewise(ps, t, |d, _, x| d.range(x));
        }
        let v = self.kernel.eval_interval(t)? - self.poly.range(t);
        Ok(if self.reversed { -v } else { v })
    }

    fn slope(&self, t: Interval) -> Option<Interval> {
        if let Some(ps) = &self.pieces {
            return piecewise(ps, t, |_, dd, x| dd.range(x)).ok();
        }
        let d = self.kernel.derivative_interval(t, 1).ok()? - self.dpoly.range(t);
        (d.lo().is_finite() && d.hi().is_finite()).then_some(if self.reversed { -d } else { d })
    }

    fn enclose(&self, t: Interval) -> Result<Interval> {
        if let Some(ps) = &self.pieces {
            return piecewise(ps, t, poly_enclosure);
        }
        let naive = self.value(t)?;
        let Some(dv) = self.slope(t) else { return Ok(naive) };
        let m = Interval::point(t.mid());
        let centered = self.value(m)? + dv * (t - m);
        Ok(naive.intersect(&centered).unwrap_or(naive))
    }
}

/// Hull of `g` over the parts of `t` lying in each piece's domain.
fn piecewise(
    ps: &[(Interval, Poly<Interval>, Poly<Interval>)],
    t: Interval,
    g: impl Fn(&Poly<Interval>, &Poly<Interval>, Interval) -> Interval,
) -> Result<Interval> {
    ps.iter()
        .filter_map(|(dom, d, dd)| dom.intersect(&t).map(|x| g(d, dd, x)))
        .reduce(|a, b| a.hull(&b))
        .ok_or_else(|| Error::Domain(format!("t = {t} lies outside [-1, 1]")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemainderReport {
    /// Sign argument: `g ≤ 0`, `f` absolutely monotonic to degree `D − 1`, and `f^{(D)} ≤ 0`.
    pub analytic: bool,
    pub sweep: SweepVerdict,
    pub slack: f64,
}

impl RemainderReport {
    pub fn holds(&self) -> bool {
        self.sweep.holds()
    }
}

/// Checks `f ≥ H[f, g] − slack` on `[−1, 1]`; `g` must be nonpositive there.
pub fn remainder_nonneg(kernel: &Kernel, nodes: &NodeSystem, h: &Poly<Interval>, slack: f64) -> Result<RemainderReport> {
    if !nodes.annihilator_nonpositive() {
        return Err(Error::Constraint("the annihilator g must be nonpositive on [-1, 1]".into()));
    }
    let d = nodes.len();
    let analytic = match (kernel, kernel.abs_monotonic_degree()) {
        (Kernel::PFrame { p }, Ok(Monotonicity::Degree(m))) => m + 1 >= d && falling(p / 2.0, d) <= 0.0,
        (Kernel::PFrame { p }, Ok(Monotonicity::Polynomial)) => falling(p / 2.0, d) == 0.0,
        _ => false,
    };
    let phi = KernelMinusPoly::new(kernel, h, false);
    let sweep = sweep_nonneg(&phi, Interval::new(-1.0, 1.0), slack, SWEEP_DEPTH)?;
    Ok(RemainderReport { analytic, sweep, slack })
}

fn falling(x: f64, k: usize) -> f64 {
    (0..k).map(|i| x - i as f64).product()
}
