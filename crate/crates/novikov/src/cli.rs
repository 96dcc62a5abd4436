//! Command-line front end.
//!
//! Six subcommands over the `.dcx` file format: `compute` (generic
//! dimensions), `check` (critical-point inequalities), `cover` (finite
//! cyclic cover + scaling law), `probe` (pointwise dimensions and jump
//! flags), `sample` (Monte Carlo torus average), and `approx` (integral
//! approximation of a rational cocycle).
//!
//! Every command emits a JSON report whose bytes depend only on the inputs
//! and flags — timings go to stderr. Exit codes: 0 when everything passed,
//! 1 when a mathematical check failed, 2 for usage, parse, validation, and
//! i/o errors.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;

use crate::approx::rational_approximation;
use crate::betti::{jump_probe, montecarlo_l2, novikov_numbers, BettiReport};
use crate::checks::{
    lacunary_check, multiplicativity_check, novikov_shubin_check, vanishing_check, CheckReport,
    CriticalVector,
};
use crate::complex::{validate_cocycle, Cocycle, DeltaComplex};
use crate::error::{Error, Result};
use crate::io::{
    parse_cocycle_text, parse_critical, parse_critical_arg, parse_points, read_complex,
    write_complex_file, ComplexFile,
};
use crate::rank::Method;
use crate::report::Report;

/// Generic and pointwise homology dimensions of free abelian covers of
/// finite Δ-complexes, driven by an integral edge cocycle.
#[derive(Parser, Debug)]
#[command(name = "novikov", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the generic dimensions of the equivariant complex.
    Compute(ComputeArgs),
    /// Check critical-point count inequalities against the computed numbers.
    Check(CheckArgs),
    /// Build the m-sheeted cyclic cover and verify the scaling law.
    Cover(CoverArgs),
    /// Specialize at chosen torus points and flag dimension jumps.
    Probe(ProbeArgs),
    /// Average pointwise dimensions over random unit-torus points.
    Sample(SampleArgs),
    /// Approximate a rational cocycle by an integral one at bounded denominator.
    Approx(ApproxArgs),
}

#[derive(Args, Clone, Debug)]
pub struct InputArgs {
    /// Complex file (.dcx)
    #[arg(long)]
    pub input: PathBuf,
    /// Cocycle override: `zero`, a path to a file with a [cocycle r]
    /// section, or inline edge values like `1,0;0,1;1,1`
    #[arg(long)]
    pub cocycle: Option<String>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct EngineArgs {
    /// Rank engine: exact | specialize | both
    #[arg(long, default_value = "both")]
    pub method: String,
    /// Random specializations per rank computation
    #[arg(long, default_value_t = 5)]
    pub trials: u32,
    /// Seed determining every randomized choice
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Critical counts per index: `0,2,0` inline or a path to a `c = [...]` file
    #[arg(long)]
    pub critical: String,
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Number of sheets (≥ 2). With --output, the cover complex and its
    /// pulled-back cocycle are written there in the .dcx format; the JSON
    /// report always goes to stdout.
    #[arg(short = 'm', long = "sheets")]
    pub sheets: u64,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub io: InputArgs,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Torus points as rational turns, one point per semicolon:
    /// `0,0; 1/3,1/2` means (e^{2πi·0}, e^{2πi·0}) and (e^{2πi/3}, −1)
    #[arg(long)]
    pub points: String,
    /// Relative singular-value cut-off for numerical ranks
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Number of random torus points
    #[arg(long, default_value_t = 200)]
    pub samples: u32,
    /// Seed determining every sampled point
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative singular-value cut-off for numerical ranks
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub io: InputArgs,
    /// Largest allowed denominator of the scale λ
    #[arg(long)]
    pub bound: i64,
}

/// Echo of the effective configuration; serialized into every report.
#[derive(Serialize, Clone, Debug, Default)]
pub struct RunConfig {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sheets: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub critical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    fn base(io: &InputArgs) -> Self {
        RunConfig {
            input: io.input.display().to_string(),
            cocycle: io.cocycle.clone(),
            output: io.output.as_ref().map(|p| p.display().to_string()),
            ..RunConfig::default()
        }
    }

    fn with_engine(mut self, engine: &EngineArgs) -> Self {
        self.method = Some(engine.method.clone());
        self.trials = Some(engine.trials);
        self.seed = Some(engine.seed);
        self
    }
}

/// Loads the complex and resolves the cocycle choice: the embedded section
/// by default, or the `--cocycle` override (`zero`, file, or inline).
fn load_input(io: &InputArgs) -> Result<(DeltaComplex, Cocycle)> {
    let file = read_complex(&io.input)?;
    let w = resolve_cocycle(&file, io.cocycle.as_deref())?;
    Ok((file.complex, w))
}

fn resolve_cocycle(file: &ComplexFile, arg: Option<&str>) -> Result<Cocycle> {
    let w = match arg {
        None => file.cocycle.clone().ok_or_else(|| {
            Error::Usage(
                "the input file has no [cocycle r] section; pass --cocycle".to_string(),
            )
        })?,
        Some("zero") => {
            let rank = file.cocycle.as_ref().map(Cocycle::rank).unwrap_or(1);
            Cocycle::zero(rank, file.complex.num_cells(1))
        }
        Some(s) if Path::new(s).is_file() => {
            let text = std::fs::read_to_string(s).map_err(|source| Error::Io {
                path: s.to_string(),
                source,
            })?;
            parse_cocycle_text(&text)?
        }
        Some(s) => parse_inline_cocycle(s)?,
    };
    if w.num_edges() != file.complex.num_cells(1) {
        return Err(Error::CocycleLength {
            values: w.num_edges(),
            edges: file.complex.num_cells(1),
        });
    }
    validate_cocycle(&file.complex, &w)?;
    Ok(w)
}

/// Parses `1,0;0,1;1,1` — semicolons separate edges, commas separate the
/// deck coordinates of each edge value.
fn parse_inline_cocycle(s: &str) -> Result<Cocycle> {
    let mut values: Vec<Vec<BigRational>> = Vec::new();
    for piece in s.split(';') {
        if piece.trim().is_empty() {
            continue;
        }
        let mut value = Vec::new();
        for tok in piece.split(',') {
            let tok = tok.trim();
            let x = BigRational::from_str(tok).map_err(|_| {
                Error::Usage(format!("bad cocycle value `{tok}`; expected a rational"))
            })?;
            value.push(x);
        }
        values.push(value);
    }
    let rank = values.first().map(Vec::len).unwrap_or(1);
    Cocycle::new(rank, values)
}

fn resolve_critical(arg: &str) -> Result<CriticalVector> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|source| Error::Io {
            path: arg.to_string(),
            source,
        })?;
        parse_critical(&text)
    } else {
        parse_critical_arg(arg)
    }
}

fn compute_report(
    c: &DeltaComplex,
    w: &Cocycle,
    engine: &EngineArgs,
) -> Result<BettiReport> {
    let method = Method::from_str(&engine.method)?;
    novikov_numbers(c, w, method, engine.trials, engine.seed)
}

pub fn cmd_compute(args: &ComputeArgs) -> Result<i32> {
    let (complex, w) = load_input(&args.io)?;
    let report = compute_report(&complex, &w, &args.engine)?;
    eprintln!("compute: ranks finished in {:.2?}", report.elapsed);
    let config = RunConfig::base(&args.io).with_engine(&args.engine);
    Report::new("compute", config, &report).emit(args.io.output.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckResults<'a> {
    numbers: &'a BettiReport,
    checks: Vec<CheckReport>,
}

pub fn cmd_check(args: &CheckArgs) -> Result<i32> {
    let (complex, w) = load_input(&args.io)?;
    let critical = resolve_critical(&args.critical)?;
    let numbers = compute_report(&complex, &w, &args.engine)?;
    eprintln!("check: ranks finished in {:.2?}", numbers.elapsed);
    let checks = vec![
        novikov_shubin_check(&critical, &numbers)?,
        vanishing_check(&critical, &numbers)?,
        lacunary_check(&critical, &numbers)?,
    ];
    let all_passed = checks.iter().all(CheckReport::passed);
    let mut config = RunConfig::base(&args.io).with_engine(&args.engine);
    config.critical = Some(args.critical.clone());
    Report::new("check", config, CheckResults { numbers: &numbers, checks })
        .emit(args.io.output.as_deref())?;
    Ok(if all_passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct CoverResults {
    sheets: u64,
    base: BettiReport,
    cover: BettiReport,
    check: CheckReport,
}

pub fn cmd_cover(args: &CoverArgs) -> Result<i32> {
    let (complex, w) = load_input(&args.io)?;
    let method = Method::from_str(&args.engine.method)?;
    let check = multiplicativity_check(
        &complex,
        &w,
        args.sheets,
        method,
        args.engine.trials,
        args.engine.seed,
    )?;
    let base = compute_report(&complex, &w, &args.engine)?;
    let (cover_complex, cover_w) = crate::complex::cyclic_cover(&complex, &w, args.sheets)?;
    let cover = compute_report(&cover_complex, &cover_w, &args.engine)?;
    eprintln!(
        "cover: base and {}-sheet cover ranks finished in {:.2?}",
        args.sheets,
        base.elapsed + cover.elapsed
    );
    if let Some(path) = &args.io.output {
        write_complex_file(path, &cover_complex, Some(&cover_w))?;
    }
    let passed = check.passed();
    let mut config = RunConfig::base(&args.io).with_engine(&args.engine);
    config.sheets = Some(args.sheets);
    let results = CoverResults {
        sheets: args.sheets,
        base,
        cover,
        check,
    };
    Report::new("cover", config, results).emit(None)?;
    Ok(if passed { 0 } else { 1 })
}

pub fn cmd_probe(args: &ProbeArgs) -> Result<i32> {
    let (complex, w) = load_input(&args.io)?;
    let points = parse_points(&args.points, w.rank())?;
    let report = jump_probe(
        &complex,
        &w,
        &points,
        args.engine.trials,
        args.engine.seed,
        args.tolerance,
    )?;
    eprintln!("probe: {} points finished in {:.2?}", points.len(), report.elapsed);
    let mut config = RunConfig::base(&args.io).with_engine(&args.engine);
    config.points = Some(args.points.clone());
    config.tolerance = Some(args.tolerance);
    Report::new("probe", config, &report).emit(args.io.output.as_deref())?;
    Ok(0)
}

pub fn cmd_sample(args: &SampleArgs) -> Result<i32> {
    let (complex, w) = load_input(&args.io)?;
    let report = montecarlo_l2(&complex, &w, args.samples, args.seed, args.tolerance)?;
    eprintln!(
        "sample: {} torus points finished in {:.2?}",
        args.samples, report.elapsed
    );
    let mut config = RunConfig::base(&args.io);
    config.samples = Some(args.samples);
    config.seed = Some(args.seed);
    config.tolerance = Some(args.tolerance);
    Report::new("sample", config, &report).emit(args.io.output.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct ApproxResults {
    denominator: i64,
    lambda: String,
    exact: bool,
    kernel_preserved: bool,
    sup_error: String,
    /// Integral edge values of the approximation, in edge order.
    cocycle: Vec<Vec<String>>,
}

pub fn cmd_approx(args: &ApproxArgs) -> Result<i32> {
    const BOUND_CAP: i64 = 1_000_000;
    if args.bound > BOUND_CAP {
        return Err(Error::Usage(format!(
            "--bound {} exceeds the supported cap {BOUND_CAP}",
            args.bound
        )));
    }
    let (complex, w) = load_input(&args.io)?;
    let start = std::time::Instant::now();
    let a = rational_approximation(&complex, &w, args.bound)?;
    eprintln!("approx: search finished in {:.2?}", start.elapsed());
    let results = ApproxResults {
        denominator: a.denominator,
        lambda: a.lambda.to_string(),
        exact: a.exact,
        kernel_preserved: a.kernel_preserved,
        sup_error: a.sup_error.to_string(),
        cocycle: (0..a.cocycle.num_edges())
            .map(|e| a.cocycle.value(e).iter().map(|x| x.to_string()).collect())
            .collect(),
    };
    let mut config = RunConfig::base(&args.io);
    config.bound = Some(args.bound);
    Report::new("approx", config, results).emit(args.io.output.as_deref())?;
    Ok(0)
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Check(args) => cmd_check(args),
        Command::Cover(args) => cmd_cover(args),
        Command::Probe(args) => cmd_probe(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Approx(args) => cmd_approx(args),
    }
}
