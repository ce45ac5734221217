//! Command-line front end: argument parsing, dispatch, report rendering and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::certify::{
    build_600cell_certificate, build_tight_certificate, causal_certificate, causal_measure, certify_600cell_range,
    moment_certificate, Certificate, CausalCase,
};
use crate::configurations::{
    catalog_entry, catalog_get, catalog_names, design_strength, tightness_check, WeightedConfiguration,
};
use crate::energy::{energy, optimize_class_weights};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::lpbound::{best_catalog_energy, default_degree, lp_lower_bound_with};
use crate::minimize::{best_of, canonicalize_support, compare_to_catalog, multistart, p_sweep, MinimizeOptions};
use crate::spaces::SpaceDescriptor;
use crate::tables::{reproduce_table, TableId, TableOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Absolute tolerance for `energy --target`.
pub const ENERGY_TOL: f64 = 1e-12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "pframe", version, about = "p-frame energies, designs and optimality certificates")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy of a catalog entry or a configuration file.
    Energy(EnergyArgs),
    /// Design strength and tightness of a configuration.
    VerifyDesign(DesignArgs),
    /// Verify a certificate file, or build a tight or moment certificate.
    Certify(CertifyArgs),
    /// Certificates for the 600-cell at one exponent or over a range.
    #[command(name = "certify-600cell")]
    Certify600cell(Cell600Args),
    /// Certified LP lower bound.
    Bound(BoundArgs),
    /// Multistart gradient descent.
    Minimize(MinimizeArgs),
    /// Certificates for the causal variational kernels.
    Causal(CausalArgs),
    /// Recompute reference tables and diff against stored values.
    ReproduceTables(TablesArgs),
    /// List catalog entries or dump one configuration.
    Catalog(CatalogArgs),
}

#[derive(Debug, Args)]
pub struct Source {
    /// Catalog entry name.
    #[arg(long, conflicts_with = "file")]
    pub config: Option<String>,
    /// Configuration JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl Source {
    fn load(&self) -> Result<(WeightedConfiguration, Option<String>)> {
        match (&self.config, &self.file) {
            (Some(name), None) => Ok((catalog_get(name)?, Some(name.clone()))),
            (None, Some(path)) => Ok((WeightedConfiguration::read(path)?, None)),
            _ => Err(Error::InvalidParameter("give exactly one of --config or --file".into())),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    Pframe,
    AbsPower,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = KernelChoice::Pframe)]
    pub kernel: KernelChoice,
    /// Re-optimize orbit weights for this kernel first.
    #[arg(long)]
    pub optimize_weights: bool,
    /// Compare against this value (defaults to the catalog golden at `p`, if any).
    #[arg(long)]
    pub target: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 6)]
    pub max_t: usize,
    /// Exit 1 unless the strength is at least this.
    #[arg(long)]
    pub expect: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Certificate JSON to re-verify.
    #[arg(long, conflicts_with_all = ["config", "moment"])]
    pub cert: Option<PathBuf>,
    /// Configuration for the optional interpolation check when re-verifying.
    #[arg(long, requires = "cert")]
    pub with_file: Option<PathBuf>,
    /// Catalog entry for a tight or moment certificate.
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Build the moment-problem upper bound instead.
    #[arg(long, requires = "config")]
    pub moment: bool,
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Cell600Args {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], conflicts_with = "p")]
    pub range: Option<Vec<f64>>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub p: f64,
    /// Degree of the auxiliary polynomial (default 6, or 8 from p = 7).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Initial Chebyshev grid size (default 4 * degree).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MinimizeArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_enum, default_value_t = KernelChoice::Pframe)]
    pub kernel: KernelChoice,
    /// Particles (default: four times the best catalog support in the space).
    #[arg(short = 'N', long = "points")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    #[arg(long)]
    pub fixed_weights: bool,
    /// Run p = q - 10^-k for k = 1..=levels approaching the even integer q instead.
    #[arg(long, value_name = "Q")]
    pub sweep_to: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub levels: u32,
    /// Write the canonicalized configuration here.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CausalArgs {
    #[arg(long, default_value = "icosahedron")]
    pub case: String,
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Tables to recompute: real, complex, code85, comparison, lp, parameters (default: all).
    pub tables: Vec<String>,
    /// Largest dimension of LP cells.
    #[arg(long, default_value_t = crate::tables::DESK_MAX_D)]
    pub max_d: usize,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Dump this entry's configuration and metadata.
    pub name: Option<String>,
}

/// A rendered report plus the exit code it implies.
pub struct Outcome {
    pub report: Value,
    /// Flat records for csv/table output; `None` flattens the report itself.
    pub rows: Option<Vec<Value>>,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, rows: None, code: EXIT_OK }
    }
}

fn to_value<T: Serialize>(t: &T) -> Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn kernel_for(choice: KernelChoice, p: f64) -> Result<Kernel> {
    let k = match choice {
        KernelChoice::Pframe => Kernel::PFrame { p },
        KernelChoice::AbsPower => Kernel::AbsPower { p },
    };
    k.validate()?;
    Ok(k)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn cert_outcome(cert: &Certificate, emit: Option<&Path>) -> Result<Outcome> {
    let text = cert.to_json()?;
    if let Some(path) = emit {
        write_file(path, &text)?;
    }
    Ok(Outcome { report: serde_json::from_str(&text)?, rows: None, code: cert.verdict.exit_code() })
}

fn run_energy(a: &EnergyArgs) -> Result<Outcome> {
    let (mut config, name) = a.source.load()?;
    let kernel = kernel_for(a.kernel, a.p)?;
    if a.optimize_weights {
        config = optimize_class_weights(&config, &kernel)?;
    }
    let mut report = energy(&config, &kernel)?;
    let golden = name.as_deref().and_then(|n| catalog_entry(n).ok()).and_then(|e| {
        e.energies.iter().find(|g| g.p == a.p && !a.optimize_weights).map(|g| (g.value, e.name.clone()))
    });
    match (a.target, golden) {
        (Some(t), _) => report = report.with_target(t, "--target"),
        (None, Some((t, src))) => report = report.with_target(t, format!("catalog:{src}")),
        _ => {}
    }
    let code = match report.abs_error {
        Some(err) if err > ENERGY_TOL => EXIT_FALSIFIED,
        _ => EXIT_OK,
    };
    Ok(Outcome { report: to_value(&report)?, rows: None, code })
}

fn run_design(a: &DesignArgs) -> Result<Outcome> {
    let (config, name) = a.source.load()?;
    let strength = design_strength(&config, a.max_t);
    let tight = tightness_check(&config);
    let code = match a.expect {
        Some(m) if strength.strength < m => EXIT_FALSIFIED,
        _ => EXIT_OK,
    };
    let report = json!({
        "config": name,
        "space": config.space,
        "n_points": config.len(),
        "strength": strength.strength,
        "max_t": a.max_t,
        "residuals": strength.residuals,
        "tightness": tight,
    });
    Ok(Outcome { report, rows: None, code })
}

fn run_certify(a: &CertifyArgs) -> Result<Outcome> {
    if let Some(path) = &a.cert {
        let mut cert = Certificate::from_json(&std::fs::read_to_string(path)?)?;
        let config = a.with_file.as_deref().map(WeightedConfiguration::read).transpose()?;
        cert.verify_in_place(config.as_ref())?;
        return cert_outcome(&cert, a.emit.as_deref());
    }
    let name = a.config.as_deref().ok_or_else(|| Error::InvalidParameter("give --cert or --config".into()))?;
    let config = catalog_get(name)?;
    let cert = if a.moment {
        moment_certificate(&config)?
    } else {
        let p = a.p.ok_or_else(|| Error::InvalidParameter("tight certificates need --p".into()))?;
        build_tight_certificate(&config, &Kernel::pframe(p)?)?
    };
    cert_outcome(&cert, a.emit.as_deref())
}

fn run_600cell(a: &Cell600Args) -> Result<Outcome> {
    match (&a.range, a.p) {
        (Some(r), None) => {
            let report = certify_600cell_range(r[0], r[1])?;
            let rows = report
                .cells
                .iter()
                .map(|c| json!({"p_lo": c.p.lo(), "p_hi": c.p.hi(), "min_lower": c.min_lower, "certified": c.certified}))
                .collect();
            Ok(Outcome { report: to_value(&report)?, rows: Some(rows), code: report.verdict.exit_code() })
        }
        (None, Some(p)) => cert_outcome(&build_600cell_certificate(p)?, a.emit.as_deref()),
        _ => Err(Error::InvalidParameter("give --range LO HI or --p".into())),
    }
}

fn run_bound(a: &BoundArgs) -> Result<Outcome> {
    let space: SpaceDescriptor = a.space.parse()?;
    let kernel = Kernel::pframe(a.p)?;
    let degree = a.degree.unwrap_or_else(|| default_degree(a.p));
    let out = lp_lower_bound_with(space, &kernel, degree, a.grid)?;
    let mut o = cert_outcome(&out.certificate, a.emit.as_deref())?;
    if let Value::Object(m) = &mut o.report {
        m.insert(
            "lp".into(),
            json!({"raw_value": out.raw_value, "epsilon": out.epsilon, "rounds": out.rounds, "grid_size": out.grid_size}),
        );
    }
    Ok(o)
}

fn run_minimize(a: &MinimizeArgs, seed: u64) -> Result<Outcome> {
    let space: SpaceDescriptor = a.space.parse()?;
    let kernel = kernel_for(a.kernel, a.p)?;
    let n = match a.n {
        Some(n) => n,
        None => {
            let (name, _) = best_catalog_energy(&space, &kernel)?
                .ok_or_else(|| Error::InvalidParameter(format!("no catalog entry in {space}; pass -N")))?;
            4 * catalog_entry(&name)?.n
        }
    };
    let opts = MinimizeOptions { max_iters: a.max_iters, optimize_weights: !a.fixed_weights, ..Default::default() };
    if let Some(q) = a.sweep_to {
        let points = p_sweep(space, q, n, a.starts, seed, a.levels, &opts)?;
        let rows = points.iter().map(to_value).collect::<Result<Vec<_>>>()?;
        let report = json!({"space": space, "q": q, "n": n, "starts": a.starts, "seed": seed, "sweep": rows.clone()});
        return Ok(Outcome { report, rows: Some(rows), code: EXIT_OK });
    }
    let runs = multistart(space, &kernel, n, a.starts, seed, &opts)?;
    let best = best_of(&runs).ok_or_else(|| Error::InvalidParameter("--starts must be positive".into()))?;
    if best.subgradient {
        eprintln!("warning: kernel evaluated at a kink; descent used subgradients");
    }
    let canonical = canonicalize_support(best, opts.merge_tol, opts.weight_floor)?;
    if let Some(path) = &a.emit {
        write_file(path, &serde_json::to_string_pretty(&canonical.to_json())?)?;
    }
    let comparison = compare_to_catalog(&canonical, &kernel)?;
    let rows: Vec<Value> = runs
        .iter()
        .map(|r| {
            json!({
                "start": r.start, "energy": r.energy, "iterations": r.iterations, "converged": r.converged,
                "stalled": r.stalled, "grad_norm": r.grad_norm, "weight_grad_norm": r.weight_grad_norm,
            })
        })
        .collect();
    let report = json!({
        "space": space,
        "kernel": kernel,
        "n": n,
        "starts": a.starts,
        "seed": seed,
        "best": {
            "start": best.start, "energy": best.energy, "iterations": best.iterations, "converged": best.converged,
            "stalled": best.stalled, "subgradient": best.subgradient, "grad_norm": best.grad_norm,
            "weight_grad_norm": best.weight_grad_norm,
        },
        "comparison": comparison,
        "configuration": canonical.to_json(),
        "runs": rows.clone(),
    });
    Ok(Outcome { report, rows: Some(rows), code: EXIT_OK })
}

fn run_causal(a: &CausalArgs) -> Result<Outcome> {
    let case: CausalCase = a.case.parse()?;
    let measure = causal_measure(case)?;
    let mut o = cert_outcome(&causal_certificate(case)?, a.emit.as_deref())?;
    if let Value::Object(m) = &mut o.report {
        m.insert("measure".into(), measure.to_json());
    }
    Ok(o)
}

fn run_tables(a: &TablesArgs) -> Result<Outcome> {
    let ids: Vec<TableId> = if a.tables.is_empty() {
        TableId::ALL.to_vec()
    } else {
        a.tables.iter().map(|t| t.parse()).collect::<Result<_>>()?
    };
    let opts = TableOptions { lp_max_d: a.max_d };
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut code = EXIT_OK;
    for id in ids {
        let r = reproduce_table(id, &opts)?;
        if !r.ok() {
            code = EXIT_FALSIFIED;
            for c in r.failures() {
                eprintln!("FAIL {} / {} / {}: expected {}, computed {:?}", id, c.row, c.column, c.expected, c.computed);
            }
        }
        for c in &r.cells {
            let mut v = to_value(c)?;
            if let Value::Object(m) = &mut v {
                m.insert("table".into(), json!(id));
            }
            rows.push(v);
        }
        reports.push(to_value(&r)?);
    }
    Ok(Outcome { report: json!({"tables": reports}), rows: Some(rows), code })
}

fn run_catalog(a: &CatalogArgs) -> Result<Outcome> {
    match &a.name {
        Some(name) => {
            let entry = catalog_entry(name)?;
            let mut report = to_value(&entry)?;
            if !entry.metadata_only {
                if let Value::Object(m) = &mut report {
                    m.insert("configuration".into(), catalog_get(name)?.to_json());
                }
            }
            Ok(Outcome::ok(report))
        }
        None => {
            let rows = catalog_names()
                .iter()
                .filter_map(|n| catalog_entry(n).ok())
                .map(|e| {
                    json!({"name": e.name, "space": e.space, "n": e.n, "strength": e.strength, "tight": e.tight,
                           "metadata_only": e.metadata_only, "description": e.description})
                })
                .collect::<Vec<_>>();
            Ok(Outcome { report: Value::Array(rows.clone()), rows: Some(rows), code: EXIT_OK })
        }
    }
}

/// Dispatches a parsed command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Energy(a) => run_energy(a),
        Command::VerifyDesign(a) => run_design(a),
        Command::Certify(a) => run_certify(a),
        Command::Certify600cell(a) => run_600cell(a),
        Command::Bound(a) => run_bound(a),
        Command::Minimize(a) => run_minimize(a, cli.seed),
        Command::Causal(a) => run_causal(a),
        Command::ReproduceTables(a) => run_tables(a),
        Command::Catalog(a) => run_catalog(a),
    }
}

/// Exit code for an error that escaped a subcommand.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotTight(_) => EXIT_FALSIFIED,
        Error::Numerical(_) | Error::Singular(_) | Error::Constraint(_) => EXIT_INCONCLUSIVE,
        _ => EXIT_USAGE,
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        other => out.push((prefix.to_string(), scalar_text(other))),
    }
}

/// Header and records, each record flattened to dotted keys.
fn tabulate(outcome: &Outcome) -> (Vec<String>, Vec<Vec<String>>) {
    match &outcome.rows {
        Some(rows) => {
            let flat: Vec<Map<String, Value>> = rows
                .iter()
                .map(|r| {
                    let mut f = Vec::new();
                    flatten("", r, &mut f);
                    f.into_iter().map(|(k, v)| (k, Value::String(v))).collect()
                })
                .collect();
            let mut header: Vec<String> = Vec::new();
            for f in &flat {
                for k in f.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let body = flat.iter().map(|f| header.iter().map(|h| f.get(h).map(scalar_text).unwrap_or_default()).collect()).collect();
            (header, body)
        }
        None => {
            let mut f = Vec::new();
            flatten("", &outcome.report, &mut f);
            (vec!["key".into(), "value".into()], f.into_iter().map(|(k, v)| vec![k, v]).collect())
        }
    }
}

/// Renders a report in the requested format.
pub fn render(outcome: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&outcome.report)? + "\n"),
        Format::Csv => {
            let (header, body) = tabulate(outcome);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&header).map_err(std::io::Error::from)?;
            for r in body {
                w.write_record(&r).map_err(std::io::Error::from)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?)
        }
        Format::Table => {
            let (header, body) = tabulate(outcome);
            let widths: Vec<usize> = (0..header.len())
                .map(|i| body.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |r: &[String]| {
                let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                cells.join("  ").trim_end().to_string() + "\n"
            };
            let mut s = line(&header);
            s.push_str(&line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
            body.iter().for_each(|r| s.push_str(&line(r)));
            Ok(s)
        }
    }
}

/// Parses `args`, runs the command and writes the report; returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(stderr, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return error_code(&e);
        }
    };
    let text = match render(&outcome, cli.format) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(Error::from),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    outcome.code
}
