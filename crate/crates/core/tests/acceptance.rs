//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::Instant;

use nalgebra::DMatrix;
use num::{BigRational, FromPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pframe::certify::{
    build_600cell_certificate, causal_certificate, certify_600cell_range, tight_certificate_for, CausalCase, Certificate,
    Check, Verdict,
};
use pframe::configurations::{
    catalog_entry, catalog_get, catalog_names, code85_parts, design_strength, inner_product_census, WeightedConfiguration,
};
use pframe::energy::{catalog_energy, energy_value};
use pframe::interval::Interval;
use pframe::jacobi::{gauss_jacobi, jacobi_eval_all};
use pframe::kernels::Kernel;
use pframe::lpbound::{best_catalog_energy, lp_lower_bound, lp_table, rp};
use pframe::minimize::{best_of, canonicalize_support, compare_to_catalog, multistart, MinimizeOptions};
use pframe::spaces::{random_isometry, random_unit_scalar, Field, Kind, SpaceDescriptor, UnitVector};
use pframe::tables::{reproduce_table, TableId, TableOptions};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn energy_goldens() -> Outcome {
    let mut cells = 0;
    let mut worst: f64 = 0.0;
    for name in catalog_names() {
        let entry = e(catalog_entry(&name))?;
        if entry.metadata_only && name != "sic-4" && name != "sic-5" && name != "sic-6" {
            continue;
        }
        for g in &entry.energies {
            let v = e(catalog_energy(&entry, g))?;
            let err = (v - g.value).abs();
            ensure(err <= 1e-12, || format!("{name} p={}: {v} vs {}", g.p, g.value))?;
            worst = worst.max(err);
            cells += 1;
        }
    }
    let named = [
        ("icosahedron", 3.0, 0.241202265916660),
        ("24-cell", 5.0, 0.096277507157493),
        ("600-cell", 9.0, 0.047015486159502),
        ("e8-roots", 5.0, 0.022916666666667),
        ("kissing-e8", 3.0, 1.0 / 14.0),
        ("sic-3", 3.0, 2.0 / 9.0),
    ];
    for (name, p, want) in named {
        let v = e(energy_value(&e(catalog_get(name))?, &e(Kernel::pframe(p))?))?;
        ensure((v - want).abs() <= 1e-12, || format!("{name} p={p}: {v} vs {want}"))?;
        cells += 1;
    }
    Ok(format!("{cells} cells, max error {worst:.1e}"))
}

fn code85() -> Outcome {
    let code = e(catalog_get("85-code"))?;
    let m = e(energy_value(&code, &e(Kernel::pframe(6.0))?))?;
    ensure((m - 1.0 / 35.0).abs() <= 1e-12, || format!("sixth moment {m}"))?;
    let (x1, x2) = code85_parts();
    let census = [
        (inner_product_census(Field::C, &x1, &x1).counts, vec![540, 1440, 45]),
        (inner_product_census(Field::C, &x2, &x2).counts, vec![1080, 480, 40]),
        (inner_product_census(Field::C, &x1, &x2).counts, vec![720, 1080]),
    ];
    for (got, want) in census {
        ensure(got == want, || format!("census {got:?} vs {want:?}"))?;
    }
    let s = design_strength(&code, 5).strength;
    ensure(s == 3, || format!("strength {s}"))?;
    Ok(format!("moment error {:.1e}, census exact, strength 3", (m - 1.0 / 35.0).abs()))
}

fn all_passed(cert: &Certificate) -> bool {
    let c = &cert.checks;
    [&c.h_leq_f, &c.positive_definite, &c.interpolation_match, &c.design_strength_sufficient]
        .iter()
        .all(|x| matches!(x, Check::Passed))
}

fn tight_certificates() -> Outcome {
    let cases: [(&str, &[f64]); 4] =
        [("icosahedron", &[2.5, 3.0, 3.5]), ("e8-roots", &[4.5, 5.0, 5.5]), ("kissing-e8", &[3.0]), ("orthobasis-4", &[1.0])];
    let mut n = 0;
    for (name, ps) in cases {
        for &p in ps {
            let cert = e(tight_certificate_for(name, p))?;
            let energy = e(energy_value(&e(catalog_get(name))?, &e(Kernel::pframe(p))?))?;
            ensure(cert.verdict == Verdict::Verified && all_passed(&cert), || format!("{name} p={p}: {:?}", cert.checks))?;
            let b = cert.rigorous_bound();
            ensure((b - energy).abs() <= 1e-10, || format!("{name} p={p}: bound {b} vs energy {energy}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} certificates verified"))
}

fn cell600() -> Outcome {
    let range = e(certify_600cell_range(8.0, 10.0))?;
    ensure(range.verdict == Verdict::Verified, || format!("range verdict {}", range.verdict))?;
    let cert = e(build_600cell_certificate(9.0))?;
    ensure(cert.verdict == Verdict::Verified, || format!("p=9 verdict {}", cert.verdict))?;
    let b = cert.rigorous_bound();
    ensure((b - 0.047015486159502).abs() <= 1e-10, || format!("p=9 bound {b}"))?;
    Ok(format!("{} p-cells, bound at p=9 {b:.15}", range.cells.len()))
}

fn lp_bounds() -> Outcome {
    let cells = e(lp_table(3..=8))?;
    for c in &cells {
        ensure(c.pass, || format!("d={} p={}: certified {} vs printed {} ({})", c.d, c.p, c.certified, c.printed, c.verdict))?;
        let best = e(best_catalog_energy(&rp(c.d), &e(Kernel::pframe(c.p))?))?;
        if let Some((name, energy)) = best {
            ensure(c.certified <= energy + 1e-10, || format!("d={} p={}: bound above {name}", c.d, c.p))?;
        }
    }
    let cmp = e(reproduce_table(TableId::Comparison, &TableOptions::default()))?;
    ensure(cmp.ok(), || format!("comparison cells failing: {:?}", cmp.failures().collect::<Vec<_>>()))?;
    Ok(format!("{} LP cells, {} comparison cells", cells.len(), cmp.passed))
}

fn causal() -> Outcome {
    let cross = e(causal_certificate(CausalCase::CrossPolytope))?;
    ensure(cross.verdict == Verdict::Verified, || format!("cross-polytope {}", cross.verdict))?;
    let ico = e(causal_certificate(CausalCase::Icosahedron))?;
    ensure(ico.verdict == Verdict::Verified, || format!("icosahedron {}", ico.verdict))?;
    // the enclosure of the constant coefficient; rigorous_bound also subtracts the sweep slack
    let (lo, hi) = (ico.bound.lo(), ico.bound.hi());
    let err = (lo - 1.0 / 12.0).abs().max((hi - 1.0 / 12.0).abs());
    ensure(err <= 1e-12, || format!("icosahedron bound [{lo}, {hi}]"))?;
    Ok(format!("icosahedron bound {lo:.15}, error {err:.1e}"))
}

fn optimizer() -> Outcome {
    let opts = MinimizeOptions::default();
    let k3 = e(Kernel::pframe(3.0))?;
    let runs = e(multistart(rp(3), &k3, 20, 32, 2024, &opts))?;
    let mut hits = 0;
    for r in &runs {
        let c = e(canonicalize_support(r, 1e-4, 1e-8))?;
        if (r.energy - 0.241202265916660).abs() <= 1e-6 && c.len() == 6 {
            hits += 1;
        }
    }
    ensure(hits * 2 >= runs.len(), || format!("RP^2: {hits}/{} starts reached six lines", runs.len()))?;
    let k5 = e(Kernel::pframe(5.0))?;
    let runs = e(multistart(rp(4), &k5, 40, 8, 2024, &opts))?;
    let best = best_of(&runs).ok_or("no runs")?;
    let c = e(canonicalize_support(best, 1e-4, 1e-8))?;
    let cmp = e(compare_to_catalog(&c, &k5))?;
    ensure(cmp.matched.as_deref() == Some("24-cell"), || format!("RP^3 best run matched {:?}", cmp.matched))?;
    Ok(format!("RP^2 {hits}/32 starts, RP^3 best {:.12} ({} lines)", best.energy, c.len()))
}

fn random_measure(space: SpaceDescriptor, rng: &mut ChaCha8Rng) -> WeightedConfiguration {
    let n = rng.gen_range(1..30);
    let pts = (0..n).map(|_| UnitVector::random(space.field, space.d, rng)).collect();
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    WeightedConfiguration::new(space, pts, w).expect("random measure")
}

fn jacobi_properties(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let spaces = [rp(3), rp(4), rp(8), SpaceDescriptor { field: Field::C, d: 3, kind: Kind::Projective }, SpaceDescriptor {
        field: Field::H,
        d: 2,
        kind: Kind::Projective,
    }];
    let mut checks = 0;
    for space in spaces {
        let (a, b) = space.params();
        let (a, b) = (pframe::exact::rat_to_f64(&a), pframe::exact::rat_to_f64(&b));
        let (x, w) = e(gauss_jacobi(a, b, 20))?;
        let vals: Vec<Vec<f64>> = x.iter().map(|&t| jacobi_eval_all(a, b, 10, t)).collect();
        for n in 0..=10 {
            for m in 0..n {
                let ip: f64 = vals.iter().zip(&w).map(|(v, wi)| wi * v[n] * v[m]).sum();
                ensure(ip.abs() < 1e-12, || format!("<C_{n}, C_{m}> = {ip} on {space}"))?;
                checks += 1;
            }
        }
        for _ in 0..10 {
            let pts: Vec<UnitVector> = (0..10).map(|_| UnitVector::random(space.field, space.d, rng)).collect();
            for n in 1..=6 {
                let g = DMatrix::from_fn(10, 10, |i, j| jacobi_eval_all(a, b, n, space.tau(&pts[i], &pts[j]).unwrap())[n]);
                let min = g.symmetric_eigenvalues().min();
                ensure(min >= -1e-10, || format!("Gram of C_{n} on {space} has eigenvalue {min}"))?;
                checks += 1;
            }
        }
    }
    Ok(checks)
}

fn soundness(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let certs = [
        e(tight_certificate_for("icosahedron", 3.0))?,
        e(tight_certificate_for("e8-roots", 5.0))?,
        e(lp_lower_bound(rp(4), &e(Kernel::pframe(5.0))?, 6))?,
        e(causal_certificate(CausalCase::Icosahedron))?,
    ];
    let mut n = 0;
    for cert in &certs {
        ensure(cert.verdict == Verdict::Verified, || "certificate not verified".into())?;
        let bound = cert.rigorous_bound();
        for _ in 0..200 {
            let mu = random_measure(cert.space, rng);
            let v = e(energy_value(&mu, &cert.kernel))?;
            ensure(v >= bound - 1e-12, || format!("measure with energy {v} below bound {bound} on {}", cert.space))?;
            n += 1;
        }
    }
    Ok(n)
}

fn invariance(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut n = 0;
    for name in ["icosahedron", "sic-3", "orthobasis-h-3", "24-cell", "85-code"] {
        let c = e(catalog_get(name))?;
        let k = e(Kernel::pframe(3.7))?;
        let e0 = e(energy_value(&c, &k))?;
        for _ in 0..10 {
            let u = random_isometry(c.space.field, c.space.d, rng);
            let s: Vec<_> = (0..c.len()).map(|_| random_unit_scalar(c.space.field, rng)).collect();
            let e1 = e(energy_value(&e(c.transformed(&u, &s))?, &k))?;
            ensure((e0 - e1).abs() <= 1e-12, || format!("{name}: {e0} vs {e1}"))?;
            n += 1;
        }
    }
    Ok(n)
}

fn q(x: f64) -> BigRational {
    BigRational::from_f64(x).expect("finite")
}

fn contains(iv: Interval, x: &BigRational) -> bool {
    q(iv.lo()) <= *x && *x <= q(iv.hi())
}

fn containment(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let draw = |rng: &mut ChaCha8Rng| {
        let a: f64 = rng.gen_range(-1e3..1e3) * 2f64.powi(rng.gen_range(-40..40));
        let b: f64 = a + rng.gen_range(0.0..1.0) * a.abs().max(1e-300);
        Interval::new(a, b)
    };
    let cases = 10_000;
    for _ in 0..cases {
        let (x, y) = (draw(rng), draw(rng));
        let (xs, ys) = (q(x.lo()), q(y.hi()));
        ensure(contains(x + y, &(xs.clone() + ys.clone())), || format!("{x} + {y}"))?;
        ensure(contains(x - y, &(xs.clone() - ys.clone())), || format!("{x} - {y}"))?;
        ensure(contains(x * y, &(xs.clone() * ys.clone())), || format!("{x} * {y}"))?;
        if !y.contains_zero() {
            ensure(contains(x / y, &(xs.clone() / ys.clone())), || format!("{x} / {y}"))?;
        }
        let a = x.lo().abs().max(1e-300);
        let s = e(Interval::point(a).sqrt())?;
        ensure(q(s.lo()) * q(s.lo()) <= q(a) && q(a) <= q(s.hi()) * q(s.hi()), || format!("sqrt {a}"))?;
    }
    Ok(cases * 5)
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let j = jacobi_properties(&mut rng)?;
    let s = soundness(&mut rng)?;
    let i = invariance(&mut rng)?;
    let c = containment(&mut rng)?;
    Ok(format!("jacobi {j}, soundness {s}, invariance {i}, interval {c}: zero violations"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("energy goldens", energy_goldens),
        ("85-vector code", code85),
        ("tight certificates", tight_certificates),
        ("600-cell range", cell600),
        ("LP bounds", lp_bounds),
        ("causal certificates", causal),
        ("optimizer reproduction", optimizer),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS  {}  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {}  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
