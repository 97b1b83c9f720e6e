//! The `odoni` command line: parameter search, certificate generation and
//! re-verification, group checks, Frobenius sampling, orbit dumps and
//! Newton polygons. Every command writes JSON to stdout (or `--output`) and
//! one summary line to stderr.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use odoni_core::arith::{serde_rat, FactorBudget};
use odoni_core::certificates::{
    build_poly, certify, critical_orbit, first_orbit_failure, verify_bundle, BundleOptions, BundleStatus,
    CertificateBundle,
};
use odoni_core::chebotarev::{compare_to_group, density_from_samples, sample_primes, DensityReport, FrobeniusSample};
use odoni_core::newton::newton_polygon;
use odoni_core::params::{check_hypotheses, choose_a, search_a, HypothesisReport, OdoniParams};
use odoni_core::tree::{bsgs_order, contains_gamma, gamma_order, standard_sigmas};
use odoni_core::{PolyRat, Prime};
use serde::Serialize;
use serde_json::{json, Value};

use config::{parse_primes, parse_rational, ParamsFile, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input: exit 2.
    Usage(String),
    /// The input was read and checked, and the check failed: exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

impl From<odoni_core::Error> for CliError {
    fn from(e: odoni_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "odoni", version, about = "Certificates and experiments for X^a (X - A)^(n-a) + A")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured seed and ODONI_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for `sample`.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Write JSON here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// JSON is the only output format; accepted for scripts that pass it.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for A satisfying every hypothesis.
    Search {
        n: u32,
        /// Exponent; defaults to the rule's choice for n.
        #[arg(long)]
        a: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        s_ram: Vec<u64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        height_bound: Option<u64>,
    },
    /// Build a certificate bundle for a parameter file.
    Certify {
        params: PathBuf,
        #[arg(long)]
        k_max: Option<u32>,
        /// Factoring effort per level; 0 disables factoring.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Re-check a certificate bundle from its recorded witnesses.
    Verify { certificate: PathBuf },
    /// Does <sigma_0, sigma_j, sigma_inf> contain Gamma(N) in Aut(T_{n,k})?
    Group {
        n: usize,
        a: usize,
        k: usize,
        #[arg(value_name = "N")]
        big_n: usize,
        /// Leave one generator family out.
        #[arg(long)]
        drop: Option<Family>,
    },
    /// Factor iterates modulo primes; newline-delimited JSON.
    Sample {
        /// Parameter file; alternatively give `--coeffs`.
        params: Option<PathBuf>,
        /// Coefficients, constant term first: `1,-1,1` is X^2 - X + 1.
        #[arg(long, conflicts_with = "params", allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        p_max: Option<u64>,
    },
    /// Dump the normalized critical orbit with its checks.
    Orbit {
        params: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Newton polygon at p of f^k (parameter file) or of a given polynomial.
    Polygon {
        params: Option<PathBuf>,
        #[arg(long, conflicts_with = "params", allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Sigma0,
    SigmaJ,
    SigmaInf,
}

/// Parses `args` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply_env()?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    if cli.output.is_some() {
        cfg.output = cli.output.clone();
    }
    let workers = match cli.command {
        Command::Sample { .. } => cfg.workers.unwrap_or(0),
        _ => 1,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| dispatch(cli.command, &cfg))
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::Search {
            n,
            a,
            s_ram,
            count,
            height_bound,
        } => cmd_search(
            cfg,
            n,
            a,
            &s_ram,
            count.unwrap_or(cfg.search.count),
            height_bound.unwrap_or(cfg.search.height_bound),
        ),
        Command::Certify { params, k_max, budget } => {
            let mut budget_cfg = cfg.budget;
            if let Some(b) = budget {
                budget_cfg = FactorBudget {
                    effort: b,
                    trial_bound: budget_cfg.trial_bound.min(b),
                };
            }
            let opts = BundleOptions {
                k_max: k_max.unwrap_or(cfg.certify.k_max),
                budget: budget_cfg,
                seed: cfg.seed,
            };
            cmd_certify(cfg, &params, &opts)
        }
        Command::Verify { certificate } => cmd_verify(cfg, &certificate),
        Command::Group { n, a, k, big_n, drop } => cmd_group(cfg, n, a, k, big_n, drop),
        Command::Sample { params, coeffs, k, p_max } => {
            let f = polynomial_input(params.as_deref(), coeffs.as_deref())?;
            cmd_sample(cfg, &f, k.unwrap_or(cfg.sample.k), p_max.unwrap_or(cfg.sample.p_max))
        }
        Command::Orbit { params, k } => cmd_orbit(cfg, &params, k),
        Command::Polygon { params, coeffs, k, p } => cmd_polygon(cfg, params.as_deref(), coeffs.as_deref(), k, p),
    }
}

fn load_params(path: &Path) -> Result<OdoniParams, CliError> {
    ParamsFile::load(path)?.to_params()
}

pub fn parse_coeffs(s: &str) -> Result<PolyRat, CliError> {
    let coeffs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    let f = PolyRat::new(coeffs);
    match f.degree() {
        Some(d) if d >= 1 => Ok(f),
        _ => Err(CliError::Usage(format!("'{s}' is not a polynomial of positive degree"))),
    }
}

fn polynomial_input(params: Option<&Path>, coeffs: Option<&str>) -> Result<PolyRat, CliError> {
    match (params, coeffs) {
        (Some(path), None) => Ok(build_poly(&load_params(path)?)),
        (None, Some(c)) => parse_coeffs(c),
        _ => Err(CliError::Usage("give a parameter file or --coeffs".into())),
    }
}

fn open_output(cfg: &RunConfig) -> Result<Box<dyn Write>, CliError> {
    match &cfg.output {
        Some(path) => std::fs::File::create(path)
            .map(|f| Box::new(std::io::BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::Usage(format!("write failed: {e}"))
}

fn emit<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), CliError> {
    let mut out = open_output(cfg)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(io_error)
}

#[derive(Serialize)]
struct SearchHit {
    params: OdoniParams,
    report: HypothesisReport,
}

fn cmd_search(
    cfg: &RunConfig,
    n: u32,
    a: Option<u32>,
    s_ram: &[u64],
    count: usize,
    height_bound: u64,
) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::Usage(format!("degree {n} is below 2")));
    }
    let a = a.unwrap_or_else(|| choose_a(n));
    let s_ram = parse_primes(s_ram)?;
    let hits: Vec<SearchHit> = search_a(n, a, &s_ram, height_bound, count)?
        .into_iter()
        .map(|(big_a, report)| SearchHit {
            params: OdoniParams::new(n, a, big_a, s_ram.clone()).expect("search returns valid shapes"),
            report,
        })
        .collect();
    emit(cfg, &hits)?;
    eprintln!("search: {} value(s) of A for n = {n}, a = {a} at height <= {height_bound}", hits.len());
    if hits.is_empty() {
        return Err(CliError::Failed("no parameters found".into()));
    }
    Ok(())
}

fn cmd_certify(cfg: &RunConfig, path: &Path, opts: &BundleOptions) -> Result<(), CliError> {
    let params = load_params(path)?;
    let report = check_hypotheses(&params);
    if !report.is_valid() {
        let names: Vec<&str> = report.failures().iter().map(|h| h.name()).collect();
        return Err(CliError::Usage(format!("{params}: hypotheses fail: {}", names.join(", "))));
    }
    let bundle = certify(&params, opts)?;
    emit(cfg, &bundle)?;
    match bundle.status() {
        BundleStatus::FullyWitnessed => {
            eprintln!("certify: {params}: fully witnessed to level {}", opts.k_max);
            Ok(())
        }
        BundleStatus::Existential(levels) => {
            eprintln!("certify: {params}: existential (non-square) at levels {levels:?}");
            Ok(())
        }
        BundleStatus::Invalid(problems) => Err(CliError::Failed(format!("{params}: {}", problems.join("; ")))),
    }
}

fn cmd_verify(cfg: &RunConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let bundle: CertificateBundle =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let problems = verify_bundle(&bundle);
    emit(cfg, &json!({ "valid": problems.is_empty(), "problems": problems }))?;
    if problems.is_empty() {
        eprintln!("verify: {}: valid", bundle.params);
        Ok(())
    } else {
        Err(CliError::Failed(format!("{}: {}", bundle.params, problems.join("; "))))
    }
}

/// Small integers as JSON numbers, larger ones as decimal strings.
fn big_json(m: &num_bigint::BigInt) -> Value {
    match m.to_u64() {
        Some(v) => json!(v),
        None => json!(m.to_string()),
    }
}

fn cmd_group(cfg: &RunConfig, n: usize, a: usize, k: usize, big_n: usize, drop: Option<Family>) -> Result<(), CliError> {
    let sigmas = standard_sigmas(n, a, k, big_n)?;
    let mut gens = Vec::new();
    if drop != Some(Family::Sigma0) {
        gens.push(sigmas.sigma_0.clone());
    }
    if drop != Some(Family::SigmaJ) {
        gens.extend(sigmas.sigma_j.iter().cloned());
    }
    if drop != Some(Family::SigmaInf) {
        gens.push(sigmas.sigma_inf.clone());
    }
    let contains = contains_gamma(&gens, n, k, big_n)?;
    let order = bsgs_order(&gens)?;
    let dropped = drop.map(|f| f.to_possible_value().expect("no skipped variants").get_name().to_string());
    emit(
        cfg,
        &json!({
            "n": n, "a": a, "k": k, "N": big_n,
            "dropped": dropped,
            "contains_gamma": contains,
            "order": big_json(&order),
            "gamma_order": big_json(&gamma_order(n, k, big_n)?),
        }),
    )?;
    eprintln!("group: (n, a, k, N) = ({n}, {a}, {k}, {big_n}): order {order}, contains Gamma(N): {contains}");
    if contains {
        Ok(())
    } else {
        Err(CliError::Failed(format!("generators do not contain Gamma({big_n})")))
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SampleRecord<'a> {
    Sample(&'a FrobeniusSample),
    Density(&'a DensityReport),
    GroupComparison { level: u32, total_variation: Option<f64> },
}

fn cmd_sample(cfg: &RunConfig, f: &PolyRat, k: u32, p_max: u64) -> Result<(), CliError> {
    if k == 0 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let n = f.degree().unwrap_or(0);
    let samples = sample_primes(f, k, p_max)?;
    let density = density_from_samples(&samples, n, k as usize, p_max)?;
    let tv = compare_to_group(&samples, n, k as usize).ok();
    let mut out = open_output(cfg)?;
    let mut line = |r: &SampleRecord| -> Result<(), CliError> {
        serde_json::to_writer(&mut out, r).map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(out).map_err(io_error)
    };
    for s in &samples {
        line(&SampleRecord::Sample(s))?;
    }
    line(&SampleRecord::Density(&density))?;
    line(&SampleRecord::GroupComparison {
        level: k,
        total_variation: tv,
    })?;
    out.flush().map_err(io_error)?;
    let est: Vec<String> = density.estimates.iter().map(|e| format!("{e:.4}")).collect();
    eprintln!(
        "sample: {} primes <= {p_max}; root densities [{}]; level-{k} TV {}",
        density.primes_used,
        est.join(", "),
        tv.map_or("n/a".into(), |t| format!("{t:.4}"))
    );
    match samples.iter().find(|s| !s.tower_compatible) {
        Some(s) => Err(CliError::Failed(format!("tower incompatibility at p = {}", s.p))),
        None => Ok(()),
    }
}

fn cmd_orbit(cfg: &RunConfig, path: &Path, k: u32) -> Result<(), CliError> {
    let params = load_params(path)?;
    let orbit = critical_orbit(&params, k)?;
    emit(cfg, &orbit)?;
    match first_orbit_failure(&orbit) {
        None => {
            eprintln!("orbit: {params}: all identities hold for k <= {k}");
            Ok(())
        }
        Some((j, id)) => Err(CliError::Failed(format!("{params}: {id} fails at k = {j}"))),
    }
}

fn cmd_polygon(cfg: &RunConfig, params: Option<&Path>, coeffs: Option<&str>, k: u32, p: u64) -> Result<(), CliError> {
    let p = Prime::new(p)?;
    let f = polynomial_input(params, coeffs)?.iterate(k)?;
    let polygon = newton_polygon(&f, &p)?;
    let roots: Vec<Value> = polygon
        .root_valuation_counts()
        .iter()
        .map(|(v, c)| json!({ "valuation": serde_rat::to_pair(v), "count": c }))
        .collect();
    emit(cfg, &json!({ "p": p, "degree": f.degree(), "polygon": polygon, "root_valuations": roots }))?;
    let shape: Vec<String> = polygon
        .root_valuation_counts()
        .iter()
        .map(|(v, c)| format!("{c} x {v}"))
        .collect();
    eprintln!("polygon: root valuations at {p}: {}", shape.join(", "));
    Ok(())
}
