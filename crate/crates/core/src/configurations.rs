//! Weighted configurations, the named catalog, and design/distance checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num::Complex;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, rat_to_f64, solve_exact, Rational, Surd};
use crate::jacobi::{jacobi_eval_all, jacobi_normalized};
use crate::kernels::Kernel;
use crate::spaces::{inner_raw, tau_from_inner, Field, Kind, SpaceDescriptor, UnitVector};

/// Tolerance for merging floating τ values.
pub const DISTANCE_TOL: f64 = 1e-9;
/// Tolerance on weighted moment sums for design strength.
pub const DESIGN_TOL: f64 = 1e-10;

/// A discrete probability measure `Σ ω_x δ_x`.
#[derive(Clone, Debug)]
pub struct WeightedConfiguration {
    pub space: SpaceDescriptor,
    pub points: Vec<UnitVector>,
    pub weights: Vec<f64>,
    /// Orbit labels; points sharing a label are expected to carry equal weight.
    pub classes: Vec<usize>,
}

impl WeightedConfiguration {
    /// Validates dimensions and weights; weights must sum to 1 within `1e-10` and are then rescaled.
    pub fn new(space: SpaceDescriptor, points: Vec<UnitVector>, weights: Vec<f64>) -> Result<Self> {
        let classes = vec![0; points.len()];
        WeightedConfiguration::with_classes(space, points, weights, classes)
    }

    pub fn with_classes(
        space: SpaceDescriptor,
        points: Vec<UnitVector>,
        mut weights: Vec<f64>,
        classes: Vec<usize>,
    ) -> Result<Self> {
        space.validate()?;
        if points.is_empty() {
            return Err(Error::InvalidParameter("a configuration needs at least one point".into()));
        }
        if weights.len() != points.len() || classes.len() != points.len() {
            return Err(Error::Mismatch(format!(
                "{} points, {} weights, {} class labels",
                points.len(),
                weights.len(),
                classes.len()
            )));
        }
        if let Some(x) = points.iter().find(|x| x.field() != space.field || x.dim() != space.d) {
            return Err(Error::Mismatch(format!("point in {}^{} for space {space}", x.field(), x.dim())));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
        }
        let s = crate::energy::neumaier_sum(weights.iter().copied());
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::Constraint(format!("weights sum to {s}, not 1")));
        }
        weights.iter_mut().for_each(|w| *w /= s);
        Ok(WeightedConfiguration { space, points, weights, classes })
    }

    pub fn uniform(space: SpaceDescriptor, points: Vec<UnitVector>) -> Result<Self> {
        let n = points.len().max(1);
        WeightedConfiguration::new(space, points, vec![1.0 / n as f64; n])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn tau(&self, i: usize, j: usize) -> f64 {
        let f = self.space.field;
        tau_from_inner(inner_raw(f, self.points[i].components(), self.points[j].components()), self.space.kind)
    }

    /// Row-major `N × N` matrix of τ values.
    pub fn tau_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            out[i * n + i] = 1.0;
            for j in 0..i {
                let t = self.tau(i, j);
                out[i * n + j] = t;
                out[j * n + i] = t;
            }
        }
        out
    }

    /// The same measure with every point replaced by two copies of half weight.
    pub fn duplicated(&self) -> WeightedConfiguration {
        let mut c = self.clone();
        c.points = self.points.iter().flat_map(|p| [p.clone(), p.clone()]).collect();
        c.weights = self.weights.iter().flat_map(|w| [w / 2.0, w / 2.0]).collect();
        c.classes = self.classes.iter().flat_map(|&k| [k, k]).collect();
        c
    }

    /// Applies `x ↦ U x λ_x` for an isometry `U` and per-point unit scalars.
    pub fn transformed(&self, u: &[Vec<crate::spaces::Quat>], scalars: &[crate::spaces::Quat]) -> Result<Self> {
        let points = self
            .points
            .iter()
            .zip(scalars)
            .map(|(p, &l)| p.apply_left(u)?.scale_right(l))
            .collect::<Result<Vec<_>>>()?;
        let mut c = self.clone();
        c.points = points;
        Ok(c)
    }

    pub fn to_json(&self) -> Value {
        let k = self.space.field.dim_r();
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let coords: Vec<Value> = p
                    .components()
                    .chunks(k)
                    .map(|c| if k == 1 { json!(c[0]) } else { json!(c) })
                    .collect();
                Value::Array(coords)
            })
            .collect();
        json!({
            "space": {"field": self.space.field.to_string(), "d": self.space.d, "kind": self.space.kind},
            "points": points,
            "weights": self.weights,
        })
    }

    /// Reads `{space:{field,d,kind}, points:[[coords]], weights:[...]}`; complex coordinates are
    /// `[re, im]`, quaternionic ones `[a, b, c, d]`. Missing weights mean uniform.
    pub fn from_json(v: &Value) -> Result<Self> {
        let file: ConfigFile = serde_json::from_value(v.clone())?;
        let field: Field = file.space.field.parse()?;
        let space = SpaceDescriptor::new(field, file.space.d, file.space.kind)?;
        let k = field.dim_r();
        let mut points = Vec::with_capacity(file.points.len());
        for (i, row) in file.points.iter().enumerate() {
            if row.len() != space.d {
                return Err(Error::Mismatch(format!("point {i} has {} coordinates, expected {}", row.len(), space.d)));
            }
            let mut comps = Vec::with_capacity(space.d * k);
            for c in row {
                let parts: Vec<f64> = match c {
                    Value::Number(x) => vec![x.as_f64().unwrap_or(f64::NAN)],
                    Value::Array(a) => a.iter().map(|x| x.as_f64().unwrap_or(f64::NAN)).collect(),
                    _ => return Err(Error::Parse(format!("bad coordinate {c} in point {i}"))),
                };
                if parts.len() > k {
                    return Err(Error::Mismatch(format!("coordinate {c} has too many components for {field}")));
                }
                comps.extend((0..k).map(|j| parts.get(j).copied().unwrap_or(0.0)));
            }
            points.push(UnitVector::new(field, comps).map_err(|e| Error::Parse(format!("point {i}: {e}")))?);
        }
        let weights = file.weights.unwrap_or_else(|| vec![1.0 / points.len().max(1) as f64; points.len()]);
        WeightedConfiguration::new(space, points, weights)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        WeightedConfiguration::from_json(&v)
    }
}

#[derive(Deserialize)]
struct ConfigFile {
    space: SpaceFile,
    points: Vec<Vec<Value>>,
    weights: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct SpaceFile {
    field: String,
    d: usize,
    kind: Kind,
}

/// Distinct τ values (ascending) with counts over ordered pairs, diagonal included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceSet {
    pub values: Vec<f64>,
    pub counts: Vec<usize>,
}

impl DistanceSet {
    /// Values other than `τ = 1`.
    pub fn interior(&self) -> Vec<f64> {
        self.values.iter().copied().filter(|t| *t < 1.0 - DISTANCE_TOL).collect()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.values.iter().any(|v| (v - t).abs() <= DISTANCE_TOL)
    }

    /// True when the values agree one-to-one with `expected` within the merge tolerance.
    pub fn matches(&self, expected: &[Surd]) -> bool {
        let mut e: Vec<f64> = expected.iter().map(Surd::to_f64).collect();
        e.sort_by(f64::total_cmp);
        e.len() == self.values.len() && e.iter().zip(&self.values).all(|(a, b)| (a - b).abs() <= 1e-8)
    }

    /// Exact forms of the values when each is a recognizable quadratic surd.
    pub fn recognize(&self) -> Option<Vec<Surd>> {
        self.values.iter().map(|&t| Surd::recognize(t, 1e-9)).collect()
    }
}

fn cluster(mut vals: Vec<f64>) -> DistanceSet {
    vals.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for v in vals {
        match values.last() {
            Some(&last) if (v - last).abs() <= DISTANCE_TOL => {
                *counts.last_mut().unwrap() += 1;
                *sums.last_mut().unwrap() += v;
            }
            _ => {
                values.push(v);
                counts.push(1);
                sums.push(v);
            }
        }
    }
    let values = sums.iter().zip(&counts).map(|(s, &c)| s / c as f64).collect();
    DistanceSet { values, counts }
}

pub fn distance_set(config: &WeightedConfiguration) -> DistanceSet {
    cluster(config.tau_matrix())
}

/// Census of `|⟨x, y⟩|` over `x ∈ a`, `y ∈ b`.
pub fn inner_product_census(field: Field, a: &[UnitVector], b: &[UnitVector]) -> DistanceSet {
    let mut vals = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            vals.push(inner_raw(field, x.components(), y.components()).abs());
        }
    }
    cluster(vals)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignStrength {
    pub strength: usize,
    /// `residuals[n − 1] = Σ ω_x ω_y C_n(τ(x, y))`.
    pub residuals: Vec<f64>,
}

pub fn design_strength(config: &WeightedConfiguration, max_t: usize) -> DesignStrength {
    let (a, b) = config.space.params();
    let (a, b) = (rat_to_f64(&a), rat_to_f64(&b));
    let n = config.len();
    let taus = config.tau_matrix();
    let mut acc = vec![crate::energy::Accumulator::default(); max_t + 1];
    for i in 0..n {
        for j in 0..n {
            let w = config.weights[i] * config.weights[j];
            if w == 0.0 {
                continue;
            }
            for (k, c) in jacobi_eval_all(a, b, max_t, taus[i * n + j]).into_iter().enumerate() {
                acc[k].add(w * c);
            }
        }
    }
    let residuals: Vec<f64> = acc.iter().skip(1).map(|s| s.value()).collect();
    let strength = residuals.iter().take_while(|r| r.abs() <= DESIGN_TOL).count();
    DesignStrength { strength, residuals }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "strength")]
pub enum Tightness {
    Tight(usize),
    NotTight,
    Inconclusive,
}

/// Tight `t`-design test: `t = 2m − 1` with `m` distances including `τ = −1`, or `t = 2m` with `m` distances.
pub fn tightness_check(config: &WeightedConfiguration) -> Tightness {
    let ds = distance_set(config);
    let m = ds.interior().len();
    if m == 0 {
        return Tightness::NotTight;
    }
    let st = design_strength(config, 2 * m);
    let gray = |n: usize| st.residuals.get(n - 1).is_some_and(|r| r.abs() > DESIGN_TOL && r.abs() < 1e-6);
    if st.strength >= 2 * m {
        return Tightness::Tight(2 * m);
    }
    if st.strength == 2 * m - 1 && ds.contains(-1.0) {
        return if gray(2 * m) { Tightness::Inconclusive } else { Tightness::Tight(2 * m - 1) };
    }
    if (1..=2 * m).any(gray) {
        return Tightness::Inconclusive;
    }
    Tightness::NotTight
}

/// Realizes a real Gram matrix as unit vectors in `R^d`.
pub fn from_gram(gram: &[Vec<f64>], weights: Vec<f64>, space: SpaceDescriptor) -> Result<WeightedConfiguration> {
    if space.field != Field::R {
        return Err(Error::Unsupported("Gram realization is implemented for real spaces".into()));
    }
    let n = gram.len();
    if n == 0 || gram.iter().any(|r| r.len() != n) {
        return Err(Error::Mismatch("Gram matrix must be square and nonempty".into()));
    }
    for (i, row) in gram.iter().enumerate() {
        if (row[i] - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!("diagonal entry {i} is {} rather than 1", row[i])));
        }
        if (0..n).any(|j| (row[j] - gram[j][i]).abs() > 1e-12) {
            return Err(Error::InvalidParameter("Gram matrix is not symmetric".into()));
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let lmin = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if lmin < -1e-10 {
        return Err(Error::InvalidParameter(format!("Gram matrix is not positive semidefinite (eigenvalue {lmin:e})")));
    }
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-10).count();
    if rank > space.d {
        return Err(Error::InvalidParameter(format!("Gram matrix has rank {rank} > d = {}", space.d)));
    }
    let points = (0..n)
        .map(|i| {
            let v: Vec<f64> = (0..space.d)
                .map(|k| {
                    let col = order[k];
                    let l = eig.eigenvalues[col].max(0.0);
                    eig.eigenvectors[(i, col)] * l.sqrt()
                })
                .collect();
            UnitVector::new(Field::R, v)
        })
        .collect::<Result<Vec<_>>>()?;
    WeightedConfiguration::new(space, points, weights)
}

// ---------------------------------------------------------------------------
// Catalog

/// How the weights used for an expected energy are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// The stored (design) weights.
    Design,
    /// Orbit weights re-optimized for the kernel at that `p`.
    Optimized,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedEnergy {
    pub p: f64,
    pub value: f64,
    pub tol: f64,
    pub weights: WeightRule,
}

/// Distance multiplicities for entries without explicit coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multiplicities {
    pub taus: Vec<Surd>,
    pub counts: Vec<Surd>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub space: SpaceDescriptor,
    pub n: usize,
    pub strength: usize,
    pub tight: bool,
    /// Exact τ values including `1`, ascending; absent when not quadratic surds.
    pub distances: Option<Vec<Surd>>,
    pub energies: Vec<ExpectedEnergy>,
    /// No coordinates are built; energies come from distance multiplicities.
    pub metadata_only: bool,
}

impl CatalogEntry {
    pub fn interior_distances(&self) -> Option<Vec<Surd>> {
        self.distances.as_ref().map(|d| d.iter().filter(|t| **t != Surd::int(1)).cloned().collect())
    }

    /// Per-point distance counts of a distance-regular design, from `Σ_y C_n(τ(x, y)) = 0`, `n ≤ m`.
    pub fn multiplicities(&self) -> Result<Multiplicities> {
        let taus = self.interior_distances().ok_or_else(|| Error::Unsupported(format!("{} has no exact distances", self.name)))?;
        if taus.iter().any(|t| !t.is_rational()) {
            return Err(Error::Unsupported("multiplicities need rational distances".into()));
        }
        let m = taus.len();
        if self.strength < m {
            return Err(Error::InvalidParameter(format!("strength {} is below the {m} distances", self.strength)));
        }
        let (a, b) = self.space.params();
        let polys = (1..=m).map(|n| jacobi_normalized(&a, &b, n)).collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<Rational>> = polys.iter().map(|p| taus.iter().map(|t| p.eval(t.a())).collect()).collect();
        let counts = solve_exact(rows, vec![-rat_int(1); m])?;
        Ok(Multiplicities { taus, counts: counts.into_iter().map(Surd::rational).collect() })
    }

    /// `(1 + Σ_j a_j f(τ_j)) / N` from the multiplicities.
    pub fn energy_from_multiplicities(&self, kernel: &Kernel) -> Result<f64> {
        let m = self.multiplicities()?;
        let total: f64 = 1.0 + m.counts.iter().map(Surd::to_f64).sum::<f64>();
        let mut s = kernel.eval(1.0)?;
        for (t, c) in m.taus.iter().zip(&m.counts) {
            s += c.to_f64() * kernel.eval(t.to_f64())?;
        }
        Ok(s / total)
    }
}

fn e(p: f64, value: f64) -> ExpectedEnergy {
    ExpectedEnergy { p, value, tol: 1e-12, weights: WeightRule::Design }
}

fn e_opt(p: f64, value: f64) -> ExpectedEnergy {
    ExpectedEnergy { p, value, tol: 1e-12, weights: WeightRule::Optimized }
}

fn surds(v: &[&str]) -> Option<Vec<Surd>> {
    let mut out: Vec<Surd> = v.iter().map(|s| s.parse().expect("catalog surd")).collect();
    out.sort();
    Some(out)
}

fn rp(d: usize) -> SpaceDescriptor {
    SpaceDescriptor { field: Field::R, d, kind: Kind::Projective }
}

fn cp(d: usize) -> SpaceDescriptor {
    SpaceDescriptor { field: Field::C, d, kind: Kind::Projective }
}

struct Static {
    name: &'static str,
    description: &'static str,
    space: SpaceDescriptor,
    n: usize,
    strength: usize,
    tight: bool,
    distances: &'static [&'static str],
    energies: Vec<ExpectedEnergy>,
    metadata_only: bool,
}

fn statics() -> Vec<Static> {
    let s = |name, description, space, n, strength, tight, distances, energies| Static {
        name,
        description,
        space,
        n,
        strength,
        tight,
        distances,
        energies,
        metadata_only: false,
    };
    let meta = |name, description, space, n, strength, distances, energies| Static {
        name,
        description,
        space,
        n,
        strength,
        tight: true,
        distances,
        energies,
        metadata_only: true,
    };
    vec![
        s("icosahedron", "6 diagonals of the icosahedron", rp(3), 6, 2, true, &["-3/5", "1"], vec![e(3.0, 0.241202265916660)]),
        s(
            "reznick-11",
            "11-line weighted design with weights 2/27, 1/10, 1/10, 49/540",
            rp(3),
            11,
            3,
            false,
            &["-1", "-47/49", "-5/7", "-17/49", "-1/7", "1/49", "1/7", "1"],
            vec![e(6.0, 0.142857142857143)],
        ),
        s(
            "ico-dodeca-16",
            "icosahedron and dual dodecahedron diagonals, weights 5/84 and 9/140",
            rp(3),
            16,
            4,
            false,
            &["-1/3-4/15*sqrt(5)", "-7/9", "-3/5", "1/9", "-1/3+4/15*sqrt(5)", "1"],
            vec![e_opt(7.0, 0.124867143799450)],
        ),
        s(
            "r4-11",
            "11-line weighted 2-design in RP^3 realized from its Gram matrix",
            rp(4),
            11,
            2,
            false,
            &["-2/3-1/9*sqrt(5)", "-7/9", "-2/3", "-5/9", "-2/3+1/9*sqrt(5)", "-1/9", "1"],
            vec![e(4.0, 0.125)],
        ),
        s("d4-roots", "12 lines of the D4 roots (24-cell vertices)", rp(4), 12, 2, false, &["-1", "-1/2", "1"], vec![]),
        s(
            "24-cell",
            "24 lines of the 24-cell and its dual (the F4 roots)",
            rp(4),
            24,
            3,
            false,
            &["-1", "-1/2", "0", "1"],
            vec![e(5.0, 0.096277507157493)],
        ),
        s(
            "600-cell",
            "60 diagonals of the 600-cell",
            rp(4),
            60,
            5,
            false,
            &["-1", "-1/4-1/4*sqrt(5)", "-1/2", "-1/4+1/4*sqrt(5)", "1"],
            vec![e(9.0, 0.047015486159502)],
        ),
        s(
            "hemicube-5",
            "16-line hemicube design in RP^4, weights 5/84 and 9/140",
            rp(5),
            16,
            2,
            false,
            &["-23/25", "-7/9", "-3/5", "1"],
            vec![e_opt(3.0, 0.118257675970387)],
        ),
        s(
            "stroud-41",
            "41-line Stroud design in RP^4, weights 2/105, 8/315, 25/1008",
            rp(5),
            41,
            3,
            false,
            &["-1", "-23/25", "-3/5", "-1/2", "-7/25", "-1/5", "0", "1"],
            vec![e_opt(5.0, 0.061838820473855)],
        ),
        s(
            "cp-hemicube-6",
            "cross-polytope and hemicube in RP^5, weights 1/24 and 3/64",
            rp(6),
            22,
            2,
            false,
            &["-1", "-7/9", "-2/3", "1"],
            vec![e_opt(3.0, 0.090559619406078)],
        ),
        s(
            "e6-63",
            "minimal vectors of E6 and its dual, weights 1/60 and 2/135",
            rp(6),
            63,
            3,
            false,
            &["-1", "-7/8", "-1/2", "-1/4", "1"],
            vec![e_opt(5.0, 0.042488105634495)],
        ),
        s("kissing-e8", "28 lines of the E8 kissing configuration", rp(7), 28, 2, true, &["-7/9", "1"], vec![e(3.0, 0.071428571428571)]),
        s(
            "e7-91",
            "minimal vectors of E7 and its dual, weights 8/693 and 3/308",
            rp(7),
            91,
            3,
            false,
            &["-1", "-7/9", "-1/2", "-1/3", "1"],
            vec![e_opt(5.0, 0.030645893660944)],
        ),
        s(
            "simplex-midpoints-8",
            "36 edge midpoints of the regular simplex in R^8",
            rp(8),
            36,
            1,
            false,
            &["-41/49", "-73/98", "1"],
            vec![e(3.0, 0.059098639455782)],
        ),
        s("e8-roots", "120 lines of the E8 roots", rp(8), 120, 3, true, &["-1", "-1/2", "1"], vec![e(5.0, 0.022916666666667)]),
        s("sic-3", "Hesse SIC-POVM, 9 lines in CP^2", cp(3), 9, 2, true, &["-1/2", "1"], vec![e(3.0, 0.222222222222222)]),
        s(
            "c3-21",
            "Hesse SIC and four mutually unbiased bases in CP^2, weights 4/90 and 1/20",
            cp(3),
            21,
            3,
            false,
            &["-1", "-1/2", "-1/3", "0", "1"],
            vec![e_opt(5.0, 0.126109346785177)],
        ),
        s(
            "eisenstein-e8",
            "40 lines of the Eisenstein structure on E8 (Witting configuration)",
            cp(4),
            40,
            3,
            true,
            &["-1", "-1/3", "1"],
            vec![e(5.0, 0.068301270189222)],
        ),
        s(
            "85-code",
            "45 W(K5) roots and 40 rotated O10 vectors in CP^4, weights 4/315 and 3/280",
            cp(5),
            85,
            3,
            false,
            &["-1", "-7/9", "-1/2", "-1/3", "1"],
            vec![e_opt(5.0, 0.041997097378053)],
        ),
        meta("sic-4", "SIC-POVM in CP^3", cp(4), 16, 2, &["-3/5", "1"], vec![e(3.0, 0.146352549156242)]),
        meta("sic-5", "SIC-POVM in CP^4", cp(5), 25, 2, &["-2/3", "1"], vec![e(3.0, 0.105319726474218)]),
        meta("sic-6", "SIC-POVM in CP^5", cp(6), 36, 2, &["-5/7", "1"], vec![e(3.0, 0.080272843473504)]),
        meta("equiangular-276", "276 equiangular lines in R^23", rp(23), 276, 2, &["-23/25", "1"], vec![e(3.0, 0.011594202898551)]),
        meta(
            "kissing-leech-2300",
            "kissing configuration of the Leech lattice, 2300 lines",
            rp(23),
            2300,
            3,
            &["-1", "-7/9", "1"],
            vec![e(5.0, 0.002028985507246)],
        ),
        meta(
            "leech-roots-98280",
            "minimal vectors of the Leech lattice, 98280 lines",
            rp(24),
            98280,
            5,
            &["-1", "-7/8", "-1/2", "1"],
            vec![e(9.0, 0.000103419439357)],
        ),
        meta(
            "k12-126",
            "Eisenstein structure on the Coxeter-Todd lattice K12, 126 lines",
            cp(6),
            126,
            3,
            &["-1", "-1/2", "1"],
            vec![e(5.0, 0.027777777777778)],
        ),
        meta(
            "quaternionic-165",
            "165 lines of a quaternionic reflection group in HP^4",
            SpaceDescriptor { field: Field::H, d: 5, kind: Kind::Projective },
            165,
            3,
            &["-1", "-1/2", "1"],
            vec![],
        ),
    ]
}

/// All catalog names; parametric families are listed with a sample parameter.
pub fn catalog_names() -> Vec<String> {
    let mut v: Vec<String> = vec!["polygon-3".into(), "orthobasis-3".into(), "orthobasis-c-3".into(), "orthobasis-h-3".into()];
    v.extend(statics().into_iter().map(|s| s.name.to_string()));
    v
}

fn parametric(name: &str) -> Option<(&str, usize)> {
    let (head, n) = name.rsplit_once('-')?;
    let n: usize = n.parse().ok()?;
    matches!(head, "polygon" | "orthobasis" | "orthobasis-r" | "orthobasis-c" | "orthobasis-h").then_some((head, n))
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    if let Some((head, n)) = parametric(name) {
        return parametric_entry(name, head, n);
    }
    let s = statics().into_iter().find(|s| s.name == name).ok_or_else(|| Error::UnknownEntry(name.into()))?;
    Ok(CatalogEntry {
        name: s.name.into(),
        description: s.description.into(),
        space: s.space,
        n: s.n,
        strength: s.strength,
        tight: s.tight,
        distances: surds(s.distances),
        energies: s.energies,
        metadata_only: s.metadata_only,
    })
}

fn parametric_entry(name: &str, head: &str, n: usize) -> Result<CatalogEntry> {
    if head == "polygon" {
        if n < 2 {
            return Err(Error::InvalidParameter("a polygon needs at least 2 lines".into()));
        }
        return Ok(CatalogEntry {
            name: name.into(),
            description: format!("{n} lines through the regular {}-gon, as points of S^1 at doubled angles", 2 * n),
            space: SpaceDescriptor { field: Field::R, d: 2, kind: Kind::Sphere },
            n,
            strength: n - 1,
            tight: true,
            distances: polygon_taus(n),
            energies: vec![],
            metadata_only: false,
        });
    }
    let field = match head {
        "orthobasis" | "orthobasis-r" => Field::R,
        "orthobasis-c" => Field::C,
        _ => Field::H,
    };
    if field == Field::R && n == 2 {
        return parametric_entry(name, "polygon", 2);
    }
    let space = SpaceDescriptor::projective(field, n)?;
    let inv = 1.0 / n as f64;
    Ok(CatalogEntry {
        name: name.into(),
        description: format!("orthonormal basis of {field}^{n}"),
        space,
        n,
        strength: 1,
        tight: true,
        distances: surds(&["-1", "1"]),
        energies: vec![e(1.0, inv), e(2.0, inv)],
        metadata_only: false,
    })
}

/// `cos(2πj/N)` for the few `N` where all values are quadratic surds.
fn polygon_taus(n: usize) -> Option<Vec<Surd>> {
    let v: &[&str] = match n {
        2 => &["-1", "1"],
        3 => &["-1/2", "1"],
        4 => &["-1", "0", "1"],
        5 => &["-1/4-1/4*sqrt(5)", "-1/4+1/4*sqrt(5)", "1"],
        6 => &["-1", "-1/2", "1/2", "1"],
        8 => &["-1", "-1/2*sqrt(2)", "0", "1/2*sqrt(2)", "1"],
        10 => &["-1", "-1/4-1/4*sqrt(5)", "1/4-1/4*sqrt(5)", "-1/4+1/4*sqrt(5)", "1/4+1/4*sqrt(5)", "1"],
        12 => &["-1", "-1/2*sqrt(3)", "-1/2", "0", "1/2", "1/2*sqrt(3)", "1"],
        _ => return None,
    };
    surds(v)
}

/// Builds the named configuration with its stored weights.
pub fn catalog_get(name: &str) -> Result<WeightedConfiguration> {
    let entry = catalog_entry(name)?;
    if entry.metadata_only {
        return Err(Error::Unsupported(format!("{name} is stored as metadata only; use its distance multiplicities")));
    }
    let (points, weights, classes) = build(&entry)?;
    WeightedConfiguration::with_classes(entry.space, points, weights, classes)
}

type Built = (Vec<UnitVector>, Vec<f64>, Vec<usize>);

fn build(entry: &CatalogEntry) -> Result<Built> {
    if let Some((head, n)) = parametric(&entry.name) {
        return match head {
            "polygon" => polygon(n),
            _ if entry.space.kind == Kind::Sphere => polygon(2),
            _ => orthobasis(entry.space.field, n),
        };
    }
    match entry.name.as_str() {
        "icosahedron" => uniform_class(real_lines(icosahedron())),
        "reznick-11" => reznick(),
        "ico-dodeca-16" => classed(vec![(real_lines(icosahedron()), 5.0 / 84.0), (real_lines(dodecahedron()), 9.0 / 140.0)]),
        "r4-11" => r4_11(),
        "d4-roots" => uniform_class(real_lines(d4_roots())),
        "24-cell" => {
            let mut v = d4_roots();
            v.extend(dual_24cell());
            uniform_class(real_lines(v))
        }
        "600-cell" => uniform_class(real_lines(cell600())),
        "hemicube-5" => hemicube5(),
        "stroud-41" => stroud(),
        "cp-hemicube-6" => {
            let axes = (0..6).map(|i| unit_axis(6, i)).collect();
            let hc = sign_vectors(6).into_iter().filter(|s| s.iter().filter(|x| **x < 0.0).count() % 2 == 0).collect();
            classed(vec![(real_lines(axes), 1.0 / 24.0), (real_lines(hc), 3.0 / 64.0)])
        }
        "e6-63" => e6(),
        "kissing-e8" => uniform_class(real_lines(embed(&kissing_e8_vectors(), &[e8_r()]))),
        "e7-91" => {
            let r = e8_r();
            let e7: Vec<Vec<f64>> = e8_roots().into_iter().filter(|x| dot(x, &r).abs() < 1e-9).collect();
            classed(vec![
                (real_lines(embed(&e7, &[r.clone()])), 8.0 / 693.0),
                (real_lines(embed(&kissing_e8_vectors(), &[r])), 3.0 / 308.0),
            ])
        }
        "simplex-midpoints-8" => {
            let mut m = Vec::new();
            for i in 0..9 {
                for j in i + 1..9 {
                    let mut v = vec![-1.0 / 9.0; 9];
                    v[i] += 0.5;
                    v[j] += 0.5;
                    m.push(v);
                }
            }
            uniform_class(real_lines(embed(&m, &[vec![1.0; 9]])))
        }
        "e8-roots" => uniform_class(real_lines(e8_roots())),
        "sic-3" => uniform_class(complex_lines(hesse_sic())),
        "c3-21" => classed(vec![(complex_lines(hesse_sic()), 4.0 / 90.0), (complex_lines(mub3()), 1.0 / 20.0)]),
        "eisenstein-e8" => uniform_class(complex_lines(witting())),
        "85-code" => {
            let (x1, x2) = code85_parts();
            classed(vec![(x1, 4.0 / 315.0), (x2, 3.0 / 280.0)])
        }
        other => Err(Error::UnknownEntry(other.into())),
    }
}

/// The two parts `X₁` (45 lines) and `X₂ = UΨ` (40 lines) of the 85-line code.
pub fn code85_parts() -> (Vec<UnitVector>, Vec<UnitVector>) {
    let w = omega();
    let (one, zero) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
    let mut x1 = cyclic(&[one, zero, zero, zero, zero]);
    let mut psi = Vec::new();
    for s0 in [1.0, -1.0] {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                x1.extend(cyclic(&[zero, one, w * s0, w * s1, one * s2]));
            }
            psi.extend(cyclic(&[one, zero, w * s0, w * s1, zero]));
            psi.extend(cyclic(&[one, w * s0, one * s1, zero, zero]));
        }
    }
    let w2 = w * w;
    let u = [
        [one, -w, -w, one, zero],
        [-one, one, w2, zero, -w2],
        [w2, zero, -w2, one, one],
        [zero, one, w, -w, -one],
        [-w2, w, zero, -w, -w2],
    ];
    let x2: Vec<Vec<Complex<f64>>> =
        psi.iter().map(|v| (0..5).map(|i| (0..5).map(|k| u[i][k] * v[k]).sum::<Complex<f64>>() * 0.5).collect()).collect();
    (complex_lines(x1), complex_lines(x2))
}

fn uniform_class(points: Vec<UnitVector>) -> Result<Built> {
    let n = points.len();
    Ok((points, vec![1.0 / n as f64; n], vec![0; n]))
}

fn classed(parts: Vec<(Vec<UnitVector>, f64)>) -> Result<Built> {
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for (k, (pts, w)) in parts.into_iter().enumerate() {
        let n = pts.len();
        out.0.extend(pts);
        out.1.extend(std::iter::repeat(w).take(n));
        out.2.extend(std::iter::repeat(k).take(n));
    }
    Ok(out)
}

fn polygon(n: usize) -> Result<Built> {
    let pts = (0..n)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / n as f64;
            UnitVector::from_real(&[th.cos(), th.sin()])
        })
        .collect::<Result<Vec<_>>>()?;
    uniform_class(pts)
}

fn orthobasis(field: Field, d: usize) -> Result<Built> {
    let k = field.dim_r();
    let pts = (0..d)
        .map(|i| {
            let mut c = vec![0.0; d * k];
            c[i * k] = 1.0;
            UnitVector::new(field, c)
        })
        .collect::<Result<Vec<_>>>()?;
    uniform_class(pts)
}

fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn cyclic<T: Copy>(v: &[T]) -> Vec<Vec<T>> {
    (0..v.len()).map(|s| (0..v.len()).map(|i| v[(i + v.len() - s) % v.len()]).collect()).collect()
}

fn icosahedron() -> Vec<Vec<f64>> {
    let f = phi();
    let mut v = cyclic(&[0.0, 1.0, f]);
    v.extend(cyclic(&[0.0, -1.0, f]));
    v
}

/// Dodecahedron dual to [`icosahedron`].
fn dodecahedron() -> Vec<Vec<f64>> {
    let f = phi();
    let mut v = vec![vec![1.0, 1.0, 1.0], vec![1.0, 1.0, -1.0], vec![1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0]];
    v.extend(cyclic(&[0.0, f, 1.0 / f]));
    v.extend(cyclic(&[0.0, -f, 1.0 / f]));
    v
}

fn unit_axis(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

fn sign_vectors(d: usize) -> Vec<Vec<f64>> {
    (0..1u32 << d).map(|m| (0..d).map(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()).collect()
}

fn pairs_pm(d: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; d];
                v[i] = a;
                v[j] = b;
                out.push(v);
            }
        }
    }
    out
}

fn d4_roots() -> Vec<Vec<f64>> {
    pairs_pm(4)
}

fn dual_24cell() -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = (0..4).map(|i| unit_axis(4, i)).collect();
    v.extend(sign_vectors(4).into_iter().map(|s| s.iter().map(|x| x * 0.5).collect()));
    v
}

fn cell600() -> Vec<Vec<f64>> {
    let f = phi();
    let mut v = dual_24cell();
    let base = [f / 2.0, 0.5, 1.0 / (2.0 * f)];
    for p in even_permutations4() {
        for s in sign_vectors(3) {
            let mut x = vec![0.0; 4];
            for k in 0..3 {
                x[p[k]] = base[k] * s[k];
            }
            v.push(x);
        }
    }
    v
}

fn even_permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    let inv = (0..4).map(|i| (i + 1..4).filter(|&j| p[i] > p[j]).count()).sum::<usize>();
                    if distinct && inv % 2 == 0 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn reznick() -> Result<Built> {
    let (s1, s3, t2) = ((1.0f64 / 7.0).sqrt(), (3.0f64 / 7.0).sqrt(), 2.0 / 7f64.sqrt());
    let rows = [
        ([1.0, 0.0, 0.0], 2.0 / 27.0, 0),
        ([0.0, 1.0, 0.0], 0.1, 1),
        ([0.0, 0.0, 1.0], 0.1, 1),
        ([t2, s3, 0.0], 49.0 / 540.0, 2),
        ([t2, 0.0, s3], 49.0 / 540.0, 2),
        ([s1, s3, s3], 49.0 / 540.0, 2),
    ];
    let mut out: Built = (Vec::new(), Vec::new(), Vec::new());
    for (row, w, class) in rows {
        let signed: Vec<Vec<f64>> =
            sign_vectors(3).into_iter().map(|s| row.iter().zip(&s).map(|(a, b)| a * b).collect()).collect();
        for p in real_lines(signed) {
            out.0.push(p);
            out.1.push(w);
            out.2.push(class);
        }
    }
    Ok(out)
}

/// Gram matrix of the 11-line design in `RP^3`.
pub fn r4_11_gram() -> Vec<Vec<f64>> {
    let s5 = 5f64.sqrt();
    let (a, b) = ((s5 + 1.0) / 6.0, (s5 - 1.0) / 6.0);
    let c = 2f64.sqrt() / 3.0;
    let s = 6f64.sqrt() / 6.0;
    let t = 1.0 / 3.0;
    vec![
        vec![1.0, -2.0 / 3.0, a, a, a, a, b, b, b, b, s],
        vec![-2.0 / 3.0, 1.0, -b, -b, -b, -b, -a, -a, -a, -a, s],
        vec![a, -b, 1.0, t, -t, t, -c, -c, c, c, s],
        vec![a, -b, t, 1.0, t, -t, c, -c, c, -c, s],
        vec![a, -b, -t, t, 1.0, t, c, c, -c, -c, s],
        vec![a, -b, t, -t, t, 1.0, -c, c, -c, c, s],
        vec![b, -a, -c, c, c, -c, 1.0, t, t, -t, -s],
        vec![b, -a, -c, -c, c, c, t, 1.0, -t, t, -s],
        vec![b, -a, c, c, -c, -c, t, -t, 1.0, t, -s],
        vec![b, -a, c, -c, -c, c, -t, t, t, 1.0, -s],
        vec![s, s, s, s, s, s, -s, -s, -s, -s, 1.0],
    ]
}

fn r4_11() -> Result<Built> {
    let mut w = vec![3.0 / 40.0, 3.0 / 40.0];
    w.extend([3.0 / 32.0; 8]);
    w.push(0.1);
    let c = from_gram(&r4_11_gram(), w, rp(4))?;
    let mut classes = vec![0, 0];
    classes.extend([1; 8]);
    classes.push(2);
    Ok((c.points, c.weights, classes))
}

fn hemicube5() -> Result<Built> {
    let mut a = Vec::new();
    for i in 0..6 {
        let mut v = vec![1.0; 6];
        v[i] = -5.0;
        a.push(v);
    }
    let b: Vec<Vec<f64>> =
        sign_vectors(6).into_iter().filter(|s| s.iter().filter(|x| **x > 0.0).count() == 3).collect();
    let ones = vec![1.0; 6];
    classed(vec![(real_lines(embed(&a, &[ones.clone()])), 5.0 / 84.0), (real_lines(embed(&b, &[ones])), 9.0 / 140.0)])
}

fn stroud() -> Result<Built> {
    let a = (0..5).map(|i| unit_axis(5, i)).collect();
    classed(vec![(real_lines(a), 2.0 / 105.0), (real_lines(pairs_pm(5)), 8.0 / 315.0), (real_lines(sign_vectors(5)), 25.0 / 1008.0)])
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coordinates of `vecs` in an orthonormal basis of the complement of `normals`.
fn embed(vecs: &[Vec<f64>], normals: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = vecs.first().map_or(0, |v| v.len());
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let candidates = normals.iter().cloned().chain((0..n).map(|i| unit_axis(n, i)));
    for mut v in candidates {
        for u in &basis {
            let c = dot(&v, u);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let comp = &basis[normals.len()..];
    vecs.iter().map(|v| comp.iter().map(|u| dot(v, u)).collect()).collect()
}

pub fn e8_roots() -> Vec<Vec<f64>> {
    let mut v = pairs_pm(8);
    v.extend(
        sign_vectors(8)
            .into_iter()
            .filter(|s| s.iter().filter(|x| **x < 0.0).count() % 2 == 0)
            .map(|s| s.iter().map(|x| x * 0.5).collect()),
    );
    v
}

fn e8_r() -> Vec<f64> {
    let mut r = vec![0.0; 8];
    r[0] = 1.0;
    r[1] = 1.0;
    r
}

/// `x − r/2` for the 56 roots with `x·r = 1`.
fn kissing_e8_vectors() -> Vec<Vec<f64>> {
    let r = e8_r();
    e8_roots()
        .into_iter()
        .filter(|x| (dot(x, &r) - 1.0).abs() < 1e-9)
        .map(|x| x.iter().zip(&r).map(|(a, b)| a - b / 2.0).collect())
        .collect()
}

fn e6() -> Result<Built> {
    let mut a = vec![0.0; 8];
    a[0] = 1.0;
    a[1] = -1.0;
    let mut b = vec![0.0; 8];
    b[1] = 1.0;
    b[2] = -1.0;
    let roots = e8_roots();
    let e6: Vec<Vec<f64>> = roots.iter().filter(|x| dot(x, &a).abs() < 1e-9 && dot(x, &b).abs() < 1e-9).cloned().collect();
    // projections onto span(a, b)^⊥ of norm² 4/3
    let na = dot(&a, &a);
    let bb: Vec<f64> = {
        let c = dot(&b, &a) / na;
        b.iter().zip(&a).map(|(x, y)| x - c * y).collect()
    };
    let nb = dot(&bb, &bb);
    let dual: Vec<Vec<f64>> = roots
        .iter()
        .map(|x| {
            let (ca, cb) = (dot(x, &a) / na, dot(x, &bb) / nb);
            x.iter().enumerate().map(|(i, v)| v - ca * a[i] - cb * bb[i]).collect::<Vec<f64>>()
        })
        .filter(|y| (dot(y, y) - 4.0 / 3.0).abs() < 1e-9)
        .collect();
    let normals = [a, b];
    classed(vec![(real_lines(embed(&e6, &normals)), 1.0 / 60.0), (real_lines(embed(&dual, &normals)), 2.0 / 135.0)])
}

fn omega() -> Complex<f64> {
    Complex::from_polar(1.0, 2.0 * PI / 3.0)
}

fn hesse_sic() -> Vec<Vec<Complex<f64>>> {
    let w = omega();
    let mut out = Vec::new();
    for k in 0..3 {
        for s in 0..3 {
            let mut v = vec![Complex::new(0.0, 0.0); 3];
            v[(s + 1) % 3] = Complex::new(1.0, 0.0);
            v[(s + 2) % 3] = -w.powi(k);
            out.push(v);
        }
    }
    out
}

fn mub3() -> Vec<Vec<Complex<f64>>> {
    let w = omega();
    let mut out: Vec<Vec<Complex<f64>>> =
        (0..3).map(|i| (0..3).map(|j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    for s in 0..3 {
        for k in 0..3 {
            out.push((0..3).map(|j| w.powi(s * j * j + k * j)).collect());
        }
    }
    out
}

fn witting() -> Vec<Vec<Complex<f64>>> {
    let w = omega();
    let z = Complex::new(0.0, 0.0);
    let mut out: Vec<Vec<Complex<f64>>> =
        (0..4).map(|i| (0..4).map(|j| Complex::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    for l in 0..3 {
        for m in 0..3 {
            for n in 0..3 {
                let (a, b, c) = (w.powi(l), w.powi(m), w.powi(n));
                out.push(vec![z, a, -b, c]);
                out.push(vec![-a, z, b, c]);
                out.push(vec![a, -b, z, c]);
                out.push(vec![-a, -b, -c, z]);
            }
        }
    }
    out
}

/// Normalizes and keeps one representative per projective line, in input order.
fn dedupe(field: Field, vecs: Vec<Vec<f64>>) -> Vec<UnitVector> {
    let mut out: Vec<UnitVector> = Vec::new();
    for v in vecs {
        let Ok(u) = UnitVector::new(field, v) else { continue };
        if out.iter().all(|x| (inner_raw(field, x.components(), u.components()).norm_sqr() - 1.0).abs() > 1e-9) {
            out.push(u);
        }
    }
    out
}

fn real_lines(vecs: Vec<Vec<f64>>) -> Vec<UnitVector> {
    dedupe(Field::R, vecs)
}

fn complex_lines(vecs: Vec<Vec<Complex<f64>>>) -> Vec<UnitVector> {
    dedupe(Field::C, vecs.into_iter().map(|v| v.iter().flat_map(|c| [c.re, c.im]).collect()).collect())
}

/// τ census keyed by the exact catalog values, for reports.
pub fn census_by_value(ds: &DistanceSet) -> BTreeMap<String, usize> {
    ds.values
        .iter()
        .zip(&ds.counts)
        .map(|(&t, &c)| {
            let key = Surd::recognize(t, 1e-9).map_or_else(|| format!("{t:.12}"), |s| s.to_string());
            (key, c)
        })
        .collect()
}

/// Exact τ of a projective pair with `|⟨x,y⟩|² = q`.
pub fn tau_of_abs_sq(q: &Rational) -> Rational {
    q * rat_int(2) - rat(1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Kernel;
    use crate::spaces::{random_isometry, random_unit_scalar};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn energy_of(c: &WeightedConfiguration, p: f64) -> f64 {
        let k = Kernel::pframe(p).unwrap();
        let n = c.len();
        let t = c.tau_matrix();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += c.weights[i] * c.weights[j] * k.eval(t[i * n + j]).unwrap();
            }
        }
        s
    }

    #[test]
    fn every_entry_matches_its_record() {
        for name in catalog_names() {
            let entry = catalog_entry(&name).unwrap();
            if entry.metadata_only {
                continue;
            }
            let c = catalog_get(&name).unwrap();
            assert_eq!(c.len(), entry.n, "{name} size");
            let ds = distance_set(&c);
            if let Some(d) = &entry.distances {
                assert!(ds.matches(d), "{name} distances {:?} vs {:?}", ds.values, d);
            }
            let st = design_strength(&c, entry.strength + 1);
            assert_eq!(st.strength, entry.strength, "{name} strength {:?}", st.residuals);
            let tight = tightness_check(&c);
            assert_eq!(matches!(tight, Tightness::Tight(_)), entry.tight, "{name} tightness {tight:?}");
        }
    }

    #[test]
    fn icosahedron_lines() {
        let c = catalog_get("icosahedron").unwrap();
        for i in 0..6 {
            for j in 0..i {
                let ip = inner_raw(Field::R, c.points[i].components(), c.points[j].components()).abs();
                assert!((ip - 1.0 / 5f64.sqrt()).abs() < 1e-14);
            }
        }
        assert_eq!(tightness_check(&c), Tightness::Tight(2));
    }

    #[test]
    fn census_85() {
        let (x1, x2) = code85_parts();
        assert_eq!((x1.len(), x2.len()), (45, 40));
        assert_eq!(inner_product_census(Field::C, &x1, &x1).counts, vec![540, 1440, 45]);
        let c22 = inner_product_census(Field::C, &x2, &x2);
        assert_eq!(c22.counts, vec![1080, 480, 40]);
        assert!((c22.values[0] - 1.0 / 3.0).abs() < 1e-12 && (c22.values[1] - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(inner_product_census(Field::C, &x1, &x2).counts, vec![720, 1080]);
        let c = catalog_get("85-code").unwrap();
        assert!((energy_of(&c, 6.0) - 1.0 / 35.0).abs() < 1e-12);
        assert_eq!(design_strength(&c, 4).strength, 3);
    }

    #[test]
    fn census_counts_of_weighted_designs() {
        let counts = |name: &str| {
            let c = catalog_get(name).unwrap();
            inner_product_census(Field::R, &c.points, &c.points).counts
        };
        assert_eq!(counts("24-cell"), vec![216, 192, 144, 24]);
        assert_eq!(counts("hemicube-5"), vec![30, 90, 120, 16]);
        assert_eq!(counts("stroud-41"), vec![600, 160, 160, 240, 80, 320, 80, 41]);
        assert_eq!(counts("cp-hemicube-6"), vec![30, 240, 192, 22]);
        assert_eq!(counts("e6-63"), vec![1620, 432, 990, 864, 63]);
        assert_eq!(counts("e7-91"), vec![3906, 756, 2016, 1512, 91]);
        assert_eq!(counts("simplex-midpoints-8"), vec![756, 504, 36]);
        let c = catalog_get("c3-21").unwrap();
        assert_eq!(inner_product_census(Field::C, &c.points, &c.points).counts, vec![96, 72, 108, 144, 21]);
    }

    #[test]
    fn tight_annihilator_is_adjacent_jacobi() {
        // interior distances of the E8 roots annihilated by Q^{1,1}_{1}
        let c = catalog_get("e8-roots").unwrap();
        let inner = distance_set(&c).interior();
        let (a, b) = c.space.params();
        let q = crate::jacobi::jacobi_monic(&(a + rat_int(1)), &(b + rat_int(1)), 1).unwrap().to_f64();
        let w: Vec<f64> = inner.iter().filter(|t| **t > -1.0 + 1e-9).copied().collect();
        let annihilator = crate::polynomial::Poly::from_roots(&w);
        assert_eq!(annihilator.degree(), q.degree());
        for k in 0..=q.degree() {
            assert!((annihilator.coeff(k) - q.coeff(k)).abs() < 1e-10);
        }
    }

    #[test]
    fn strength_600_cell_residuals() {
        let c = catalog_get("600-cell").unwrap();
        let st = design_strength(&c, 9);
        assert_eq!(st.strength, 5);
        assert!(st.residuals[5].abs() > 1e-6);
        assert!(st.residuals[6..9].iter().all(|r| r.abs() < 1e-10));
        assert_eq!(tightness_check(&c), Tightness::NotTight);
    }

    #[test]
    fn gram_realizations() {
        let id: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        let c = from_gram(&id, vec![1.0 / 3.0; 3], rp(3)).unwrap();
        assert_eq!(distance_set(&c).values, vec![-1.0, 1.0]);
        let r = catalog_get("r4-11").unwrap();
        let g = r4_11_gram();
        for i in 0..11 {
            for j in 0..11 {
                let ip = inner_raw(Field::R, r.points[i].components(), r.points[j].components()).re();
                assert!((ip - g[i][j]).abs() < 1e-10);
            }
        }
        let ico = catalog_get("icosahedron").unwrap();
        let gram: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..6).map(|j| inner_raw(Field::R, ico.points[i].components(), ico.points[j].components()).re()).collect())
            .collect();
        let back = from_gram(&gram, vec![1.0 / 6.0; 6], rp(3)).unwrap();
        assert!((energy_of(&back, 3.0) - energy_of(&ico, 3.0)).abs() < 1e-13);
        assert!(from_gram(&gram, vec![1.0 / 6.0; 6], SpaceDescriptor::projective(Field::R, 3).unwrap()).is_ok());
        let mut bad = id.clone();
        bad[0][1] = 2.0;
        bad[1][0] = 2.0;
        assert!(from_gram(&bad, vec![1.0 / 3.0; 3], rp(3)).is_err());
        assert!(from_gram(&gram, vec![1.0 / 6.0; 6], SpaceDescriptor::projective(Field::R, 3).unwrap()).is_ok());
    }

    #[test]
    fn gram_rank_exceeding_dimension_fails() {
        let id: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert!(from_gram(&id, vec![0.25; 4], rp(3)).is_err());
    }

    #[test]
    fn metadata_multiplicities() {
        let m = catalog_entry("kissing-leech-2300").unwrap().multiplicities().unwrap();
        assert_eq!(m.counts, vec![Surd::int(1408), Surd::int(891)]);
        let m = catalog_entry("leech-roots-98280").unwrap().multiplicities().unwrap();
        assert_eq!(m.counts, vec![Surd::int(46575), Surd::int(47104), Surd::int(4600)]);
        let m = catalog_entry("equiangular-276").unwrap().multiplicities().unwrap();
        assert_eq!(m.counts, vec![Surd::int(275)]);
        let m = catalog_entry("k12-126").unwrap().multiplicities().unwrap();
        assert_eq!(m.counts, vec![Surd::int(45), Surd::int(80)]);
        let m = catalog_entry("quaternionic-165").unwrap().multiplicities().unwrap();
        let total: f64 = m.counts.iter().map(Surd::to_f64).sum();
        assert_eq!(total, 164.0);
        assert!(catalog_get("leech-roots-98280").is_err());
    }

    #[test]
    fn unknown_names() {
        assert!(matches!(catalog_get("nonesuch"), Err(Error::UnknownEntry(_))));
        assert_eq!(catalog_get("orthobasis-5").unwrap().len(), 5);
        assert_eq!(catalog_get("orthobasis-h-3").unwrap().space.field, Field::H);
        let single = WeightedConfiguration::uniform(rp(3), vec![UnitVector::from_real(&[1.0, 0.0, 0.0]).unwrap()]).unwrap();
        assert_eq!(distance_set(&single).values, vec![1.0]);
    }

    #[test]
    fn strength_invariant_under_isometries() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for name in ["icosahedron", "ico-dodeca-16", "sic-3", "eisenstein-e8", "e8-roots", "orthobasis-h-3", "c3-21"] {
            let c = catalog_get(name).unwrap();
            let expected = catalog_entry(name).unwrap().strength;
            for _ in 0..50 {
                let u = random_isometry(c.space.field, c.space.d, &mut rng);
                let s: Vec<_> = (0..c.len()).map(|_| random_unit_scalar(c.space.field, &mut rng)).collect();
                let t = c.transformed(&u, &s).unwrap();
                assert_eq!(design_strength(&t, expected + 1).strength, expected, "{name}");
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        for name in ["icosahedron", "sic-3", "orthobasis-h-2"] {
            let c = catalog_get(name).unwrap();
            let back = WeightedConfiguration::from_json(&c.to_json()).unwrap();
            assert_eq!(back.len(), c.len());
            for (a, b) in back.points.iter().zip(&c.points) {
                assert!(a.components().iter().zip(b.components()).all(|(x, y)| (x - y).abs() < 1e-15));
            }
        }
        let bad = json!({"space": {"field": "R", "d": 3, "kind": "projective"}, "points": [[1, 0, 0]], "weights": [0.5]});
        assert!(WeightedConfiguration::from_json(&bad).is_err());
        let oct = json!({"space": {"field": "O", "d": 3, "kind": "projective"}, "points": [], "weights": []});
        assert!(matches!(WeightedConfiguration::from_json(&oct), Err(Error::Unsupported(_))));
    }
}
