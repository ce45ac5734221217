//! Fields, unit vectors and the compact two-point homogeneous spaces.
//!
//! Every field element is stored as a quaternion `(1, i, j, k)`; reals use the
//! first slot and complex numbers the first two. The inner product is
//! `⟨x, y⟩ = Σ ȳ_i x_i`, so right scalar multiples `xλ` of a vector define the
//! same projective point and `|⟨xλ, y⟩| = |⟨x, y⟩|`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn dim_r(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Field> {
        match s {
            "R" | "r" | "real" => Ok(Field::R),
            "C" | "c" | "complex" => Ok(Field::C),
            "H" | "h" | "quaternion" => Ok(Field::H),
            "O" | "o" | "octonion" => Err(Error::Unsupported("octonionic spaces are not implemented".into())),
            _ => Err(Error::Parse(format!("unknown field {s:?}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sphere,
    Projective,
}

/// A quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quat(pub [f64; 4]);

impl Quat {
    pub const ONE: Quat = Quat([1.0, 0.0, 0.0, 0.0]);
    pub const ZERO: Quat = Quat([0.0; 4]);

    pub fn real(x: f64) -> Quat {
        Quat([x, 0.0, 0.0, 0.0])
    }

    pub fn complex(re: f64, im: f64) -> Quat {
        Quat([re, im, 0.0, 0.0])
    }

    pub fn conj(self) -> Quat {
        let [w, x, y, z] = self.0;
        Quat([w, -x, -y, -z])
    }

    pub fn norm_sqr(self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn re(self) -> f64 {
        self.0[0]
    }

    pub fn scale(self, s: f64) -> Quat {
        Quat(self.0.map(|v| v * s))
    }

    /// `e^{iθ}` in the complex slot.
    pub fn cis(theta: f64) -> Quat {
        Quat::complex(theta.cos(), theta.sin())
    }
}

impl Mul for Quat {
    type Output = Quat;
    fn mul(self, o: Quat) -> Quat {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quat([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, o: Quat) -> Quat {
        Quat([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, o: Quat) -> Quat {
        self + (-o)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        Quat(self.0.map(|v| -v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub field: Field,
    pub d: usize,
    pub kind: Kind,
}

impl SpaceDescriptor {
    pub fn new(field: Field, d: usize, kind: Kind) -> Result<Self> {
        let s = SpaceDescriptor { field, d, kind };
        s.validate()?;
        Ok(s)
    }

    pub fn projective(field: Field, d: usize) -> Result<Self> {
        SpaceDescriptor::new(field, d, Kind::Projective)
    }

    pub fn sphere(field: Field, d: usize) -> Result<Self> {
        SpaceDescriptor::new(field, d, Kind::Sphere)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidParameter(format!("dimension d = {} must be at least 2", self.d)));
        }
        if self.kind == Kind::Projective && self.field == Field::R && self.d == 2 {
            return Err(Error::InvalidParameter("RP^1 is the circle; use the sphere S^1 with doubled angles".into()));
        }
        Ok(())
    }

    /// Exact Jacobi parameters `(α, β)` of the space.
    pub fn params(&self) -> (Rational, Rational) {
        let k = self.field.dim_r() as i64;
        let d = self.d as i64;
        match self.kind {
            Kind::Projective => (rat((d - 1) * k - 2, 2), rat(k - 2, 2)),
            Kind::Sphere => {
                let a = rat(d * k - 3, 2);
                (a.clone(), a)
            }
        }
    }

    pub fn real_dim(&self) -> usize {
        self.d * self.field.dim_r()
    }

    pub fn tau(&self, x: &UnitVector, y: &UnitVector) -> Result<f64> {
        tau(x, y, self)
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match (self.kind, self.field) {
            (Kind::Projective, Field::R) => "rp",
            (Kind::Projective, Field::C) => "cp",
            (Kind::Projective, Field::H) => "hp",
            (Kind::Sphere, Field::R) => "s",
            (Kind::Sphere, Field::C) => "sc",
            (Kind::Sphere, Field::H) => "sh",
        };
        write!(f, "{prefix}:{}", self.d)
    }
}

impl FromStr for SpaceDescriptor {
    type Err = Error;
    /// `rp:d`, `cp:d`, `hp:d` for projective spaces, `s:d`, `sc:d`, `sh:d` for spheres.
    fn from_str(s: &str) -> Result<Self> {
        let (p, d) = s.split_once(':').ok_or_else(|| Error::Parse(format!("space {s:?} must look like rp:3")))?;
        let d: usize = d.parse().map_err(|_| Error::Parse(format!("bad dimension in {s:?}")))?;
        let (field, kind) = match p {
            "rp" => (Field::R, Kind::Projective),
            "cp" => (Field::C, Kind::Projective),
            "hp" => (Field::H, Kind::Projective),
            "s" | "sr" => (Field::R, Kind::Sphere),
            "sc" => (Field::C, Kind::Sphere),
            "sh" => (Field::H, Kind::Sphere),
            "op" => return Err(Error::Unsupported("octonionic spaces are not implemented".into())),
            _ => return Err(Error::Parse(format!("unknown space prefix {p:?}"))),
        };
        SpaceDescriptor::new(field, d, kind)
    }
}

/// `space_params` as a free function.
pub fn space_params(field: Field, d: usize, kind: Kind) -> Result<(Rational, Rational)> {
    Ok(SpaceDescriptor::new(field, d, kind)?.params())
}

/// A unit vector in `F^d`, stored as `d` blocks of `dim_R(F)` real components.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector {
    field: Field,
    comps: Vec<f64>,
}

impl UnitVector {
    /// Normalizes the input; rejects zero or non-finite vectors.
    pub fn new(field: Field, comps: Vec<f64>) -> Result<Self> {
        let k = field.dim_r();
        if comps.is_empty() || comps.len() % k != 0 {
            return Err(Error::Mismatch(format!("{} components do not form {field}-coordinates", comps.len())));
        }
        let n2: f64 = comps.iter().map(|v| v * v).sum();
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        let n = n2.sqrt();
        Ok(UnitVector { field, comps: comps.into_iter().map(|v| v / n).collect() })
    }

    pub fn from_real(v: &[f64]) -> Result<Self> {
        UnitVector::new(Field::R, v.to_vec())
    }

    pub fn from_quats(field: Field, q: &[Quat]) -> Result<Self> {
        let k = field.dim_r();
        if q.iter().any(|x| x.0[k..].iter().any(|&c| c != 0.0)) {
            return Err(Error::Mismatch(format!("coordinates outside {field}")));
        }
        UnitVector::new(field, q.iter().flat_map(|x| x.0[..k].to_vec()).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.comps.len() / self.field.dim_r()
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    pub fn coord(&self, i: usize) -> Quat {
        let k = self.field.dim_r();
        let mut q = [0.0; 4];
        q[..k].copy_from_slice(&self.comps[i * k..(i + 1) * k]);
        Quat(q)
    }

    pub fn coords(&self) -> Vec<Quat> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }

    /// The right multiple `xλ` (normalized).
    pub fn scale_right(&self, lambda: Quat) -> Result<UnitVector> {
        let q: Vec<Quat> = self.coords().into_iter().map(|c| c * lambda).collect();
        UnitVector::from_quats(self.field, &q)
    }

    /// `x ↦ U x` for a matrix given by rows of field elements.
    pub fn apply_left(&self, u: &[Vec<Quat>]) -> Result<UnitVector> {
        let x = self.coords();
        if u.len() != x.len() || u.iter().any(|r| r.len() != x.len()) {
            return Err(Error::Mismatch("matrix size does not match vector".into()));
        }
        let y: Vec<Quat> = u.iter().map(|row| row.iter().zip(&x).fold(Quat::ZERO, |acc, (&a, &b)| acc + a * b)).collect();
        UnitVector::from_quats(self.field, &y)
    }

    pub fn random<R: Rng + ?Sized>(field: Field, d: usize, rng: &mut R) -> UnitVector {
        loop {
            let v: Vec<f64> = (0..d * field.dim_r()).map(|_| rng.sample(StandardNormal)).collect();
            if let Ok(u) = UnitVector::new(field, v) {
                return u;
            }
        }
    }
}

/// `⟨x, y⟩ = Σ ȳ_i x_i`, conjugate-linear in `y`.
pub fn inner_product(x: &UnitVector, y: &UnitVector) -> Result<Quat> {
    if x.field != y.field || x.comps.len() != y.comps.len() {
        return Err(Error::Mismatch(format!(
            "vectors in {}^{} and {}^{}",
            x.field,
            x.dim(),
            y.field,
            y.dim()
        )));
    }
    Ok(inner_raw(x.field, &x.comps, &y.comps))
}

/// Inner product on raw component slices of equal length.
pub fn inner_raw(field: Field, x: &[f64], y: &[f64]) -> Quat {
    match field {
        Field::R => Quat::real(x.iter().zip(y).map(|(a, b)| a * b).sum()),
        Field::C => {
            let (mut re, mut im) = (0.0, 0.0);
            for (a, b) in x.chunks_exact(2).zip(y.chunks_exact(2)) {
                // (c - di)(a + bi)
                re += b[0] * a[0] + b[1] * a[1];
                im += b[0] * a[1] - b[1] * a[0];
            }
            Quat::complex(re, im)
        }
        Field::H => x.chunks_exact(4).zip(y.chunks_exact(4)).fold(Quat::ZERO, |acc, (a, b)| {
            acc + Quat([b[0], b[1], b[2], b[3]]).conj() * Quat([a[0], a[1], a[2], a[3]])
        }),
    }
}

/// `|⟨x, y⟩|²` on raw components.
pub fn abs_inner_sqr(field: Field, x: &[f64], y: &[f64]) -> f64 {
    inner_raw(field, x, y).norm_sqr()
}

/// The cosine coordinate: `Re⟨x,y⟩` on spheres, `2|⟨x,y⟩|² − 1` on projective spaces.
pub fn tau(x: &UnitVector, y: &UnitVector, space: &SpaceDescriptor) -> Result<f64> {
    if x.field != space.field || x.dim() != space.d {
        return Err(Error::Mismatch(format!("vector in {}^{} for space {space}", x.field, x.dim())));
    }
    let s = inner_product(x, y)?;
    Ok(tau_from_inner(s, space.kind))
}

pub fn tau_from_inner(s: Quat, kind: Kind) -> f64 {
    let t = match kind {
        Kind::Sphere => s.re(),
        Kind::Projective => 2.0 * s.norm_sqr() - 1.0,
    };
    t.clamp(-1.0, 1.0)
}

/// Chordal distance `√((1 − τ)/2)`.
pub fn chordal_distance(tau: f64) -> f64 {
    ((1.0 - tau) / 2.0).max(0.0).sqrt()
}

/// A random isometry of `F^d` as rows `U_{ik}` with `U*U = I`.
pub fn random_isometry<R: Rng + ?Sized>(field: Field, d: usize, rng: &mut R) -> Vec<Vec<Quat>> {
    let mut cols: Vec<Vec<Quat>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v = UnitVector::random(field, d, rng).coords();
        for u in &cols {
            // ⟨v, u⟩ = Σ ū_i v_i, removed as the right multiple u·⟨v,u⟩
            let s = u.iter().zip(&v).fold(Quat::ZERO, |acc, (&a, &b)| acc + a.conj() * b);
            for (vi, &ui) in v.iter_mut().zip(u) {
                *vi = *vi - ui * s;
            }
        }
        let n = v.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|q| q.scale(1.0 / n)).collect());
        }
    }
    (0..d).map(|i| (0..d).map(|k| cols[k][i]).collect()).collect()
}

/// A random unit scalar of the field.
pub fn random_unit_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Quat {
    let v = UnitVector::random(field, 1, rng);
    v.coord(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::exact::rat_int as int;

    fn half(n: i64) -> Rational {
        rat(n, 2)
    }

    #[test]
    fn parameters() {
        assert_eq!(space_params(Field::R, 3, Kind::Projective).unwrap(), (int(0), half(-1)));
        assert_eq!(space_params(Field::R, 4, Kind::Projective).unwrap(), (half(1), half(-1)));
        assert_eq!(space_params(Field::C, 4, Kind::Projective).unwrap(), (int(2), int(0)));
        assert_eq!(space_params(Field::H, 3, Kind::Projective).unwrap(), (int(3), int(1)));
        for d in 2..9 {
            assert_eq!(space_params(Field::R, d, Kind::Sphere).unwrap(), (half(d as i64 - 3), half(d as i64 - 3)));
        }
        assert!(space_params(Field::R, 2, Kind::Projective).is_err());
        assert!("op:3".parse::<SpaceDescriptor>().is_err());
        assert_eq!("cp:5".parse::<SpaceDescriptor>().unwrap().to_string(), "cp:5");
    }

    #[test]
    fn basic_inner_products() {
        let e1 = UnitVector::from_real(&[1.0, 0.0, 0.0]).unwrap();
        let e2 = UnitVector::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let rp = SpaceDescriptor::projective(Field::R, 3).unwrap();
        let s2 = SpaceDescriptor::sphere(Field::R, 3).unwrap();
        assert_eq!(inner_product(&e1, &e1).unwrap().re(), 1.0);
        assert_eq!(inner_product(&e1, &e2).unwrap().abs(), 0.0);
        assert_eq!(tau(&e1, &e2, &rp).unwrap(), -1.0);
        let m = UnitVector::from_real(&[-1.0, 0.0, 0.0]).unwrap();
        assert_eq!(tau(&e1, &m, &s2).unwrap(), -1.0);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a = UnitVector::from_real(&[0.0, 1.0, phi]).unwrap();
        let b = UnitVector::from_real(&[0.0, -1.0, phi]).unwrap();
        assert!((tau(&a, &b, &rp).unwrap() + 0.6).abs() < 1e-15);
        let c = UnitVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(tau(&c, &e1, &rp).is_err());
    }

    #[test]
    fn quaternion_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let q = |r: &mut ChaCha8Rng| Quat([r.gen(), r.gen(), r.gen(), r.gen::<f64>() - 0.5]);
            let (a, b, c) = (q(&mut rng), q(&mut rng), q(&mut rng));
            let l = (a * b) * c;
            let r = a * (b * c);
            for k in 0..4 {
                assert!((l.0[k] - r.0[k]).abs() < 1e-14);
            }
            assert!(((a * b).abs() - a.abs() * b.abs()).abs() < 1e-14);
            assert_eq!(a.conj().conj(), a);
        }
    }

    fn field_strategy() -> impl Strategy<Value = Field> {
        prop_oneof![Just(Field::R), Just(Field::C), Just(Field::H)]
    }

    proptest! {
        #[test]
        fn tau_invariances(field in field_strategy(), d in 3usize..6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let space = SpaceDescriptor::projective(field, d).unwrap();
            let x = UnitVector::random(field, d, &mut rng);
            let y = UnitVector::random(field, d, &mut rng);
            prop_assert!((inner_product(&x, &x).unwrap().abs() - 1.0).abs() < 1e-13);
            let t = tau(&x, &y, &space).unwrap();
            prop_assert!((-1.0..=1.0).contains(&t));
            let lam = random_unit_scalar(field, &mut rng);
            let xl = x.scale_right(lam).unwrap();
            prop_assert!((inner_product(&xl, &y).unwrap().abs() - inner_product(&x, &y).unwrap().abs()).abs() < 1e-13);
            prop_assert!((tau(&xl, &y, &space).unwrap() - t).abs() < 1e-12);
            let u = random_isometry(field, d, &mut rng);
            let (ux, uy) = (x.apply_left(&u).unwrap(), y.apply_left(&u).unwrap());
            prop_assert!((tau(&ux, &uy, &space).unwrap() - t).abs() < 1e-12);
            let sphere = SpaceDescriptor::sphere(field, d).unwrap();
            prop_assert!((tau(&ux, &uy, &sphere).unwrap() - tau(&x, &y, &sphere).unwrap()).abs() < 1e-12);
            let rho = chordal_distance(t);
            prop_assert!((1.0 - 2.0 * rho * rho - t).abs() < 1e-12);
        }
    }
}
