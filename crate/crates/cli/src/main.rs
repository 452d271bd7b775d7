//! Command-line front end: generate instances, solve, cross-verify,
//! benchmark and check the sorting construction.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use prioshapes::harness::{
    default_sortlb_algorithms, format_instance, format_schedule, generate, read_instance, run_bench,
    schedule_to_json, sortlb_check, verify, Algorithm, BenchConfig, GenKind, GenParams,
};
use prioshapes::{compute_stats, validate_instance, Error, ShapeKind};

#[derive(Parser)]
#[command(name = "prioshapes", version, about = "Elimination order of growing prioritized shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Compute the elimination schedule of an instance.
    Solve(SolveArgs),
    /// Run several solvers and compare their schedules.
    Verify(VerifyArgs),
    /// Time solvers over a list of sizes.
    Bench(BenchArgs),
    /// Print rate ratio and spread of an instance.
    Stats(StatsArgs),
    /// Check that the sorting construction sorts.
    SortlbCheck(SortlbArgs),
}

#[derive(Args)]
struct RateArgs {
    #[arg(long, default_value_t = 1.0)]
    rate_min: f64,
    /// Defaults to 1, or 100 for sortlb.
    #[arg(long)]
    rate_max: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: GenKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    rates: RateArgs,
    #[arg(long, default_value = "disk", value_parser = parse_shape)]
    shape: ShapeKind,
    /// Dimension for ball and box instances.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_algo)]
    algo: Algorithm,
    #[arg(long = "in")]
    input: PathBuf,
    /// Schedule file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the schedule as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated; every compatible solver when absent.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo)]
    algo: Vec<Algorithm>,
    /// Warn when touch times tie.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_algo, required = true)]
    algo: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "uniform", value_parser = parse_kind)]
    kind: GenKind,
    #[arg(long, default_value = "disk", value_parser = parse_shape)]
    shape: ShapeKind,
    #[command(flatten)]
    rates: RateArgs,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Exact spread by an O(n²) scan.
    #[arg(long)]
    exact_stats: bool,
    /// Also check for tied touch times.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SortlbArgs {
    /// Shapes per row.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100.0)]
    rate_max: f64,
    #[arg(long, default_value = "disk", value_parser = parse_shape)]
    shape: ShapeKind,
    /// Comma-separated; every fitting solver when absent.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo)]
    algo: Vec<Algorithm>,
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<GenKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_shape(s: &str) -> Result<ShapeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure kinds mapped to exit codes.
enum Failure {
    /// Solvers disagree or a check failed.
    Mismatch(String),
    /// Bad input, bad flags or an incompatible solver.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_json(path: Option<&PathBuf>, json: impl FnOnce() -> prioshapes::Result<String>) -> Outcome {
    if let Some(p) = path {
        emit(Some(p), &json()?)?;
    }
    Ok(())
}

fn rate_max(rates: &RateArgs, kind: GenKind) -> f64 {
    rates
        .rate_max
        .unwrap_or(if kind == GenKind::Sortlb { 100.0 } else { rates.rate_min.max(1.0) })
}

fn gen(a: GenArgs) -> Outcome {
    let params = GenParams::new(a.kind, a.n, a.seed)
        .rates(a.rates.rate_min, rate_max(&a.rates, a.kind))
        .shape(a.shape)
        .dim(a.dim);
    emit(a.out.as_ref(), &format_instance(&generate(&params)?))
}

fn solve(a: SolveArgs) -> Outcome {
    let instance = read_instance(&a.input)?;
    let start = Instant::now();
    let schedule = a.algo.solve(&instance)?;
    let secs = start.elapsed().as_secs_f64();
    emit(a.out.as_ref(), &format_schedule(&schedule))?;
    write_json(a.json.as_ref(), || schedule_to_json(&schedule))?;
    eprintln!("n={} algorithm={} time={secs:.6}s", instance.len(), a.algo);
    Ok(())
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    let instance = read_instance(&a.input)?;
    let algos = if a.algo.is_empty() {
        Algorithm::compatible(&instance)
            .into_iter()
            .filter(|&x| x != Algorithm::Sim || instance.len() <= prioshapes::naive::SIMULATION_MAX_SHAPES)
            .collect()
    } else {
        a.algo
    };
    let report = verify(&instance, &algos, a.strict)?;
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    let names: Vec<&str> = report.algorithms.iter().map(|x| x.token()).collect();
    match report.divergence {
        None => {
            println!("agree: {} (n={})", names.join(", "), instance.len());
            Ok(())
        }
        Some(d) => Err(Failure::Mismatch(d.to_string())),
    }
}

fn bench(a: BenchArgs) -> Outcome {
    let mut config = BenchConfig::new(a.algo, a.n_list);
    config.repeats = a.repeats;
    config.seed = a.seed;
    config.kind = a.kind;
    config.shape = a.shape;
    config.rate_min = a.rates.rate_min;
    config.rate_max = rate_max(&a.rates, a.kind);
    let report = run_bench(&config)?;
    print!("{}", report.table());
    write_json(a.json.as_ref(), || report.to_json())
}

fn stats(a: StatsArgs) -> Outcome {
    let instance = read_instance(&a.input)?;
    let s = compute_stats(&instance, a.exact_stats)?;
    println!("n {}", instance.len());
    println!("delta {}", s.delta);
    println!("phi_approx {}", s.phi_approx);
    if let Some(phi) = s.phi_exact {
        println!("phi_exact {phi}");
    }
    println!("alpha {}", s.alpha);
    let report = validate_instance(&instance, a.strict);
    if let Some(gp) = report.general_position {
        println!("general_position {gp}");
    }
    for v in &report.violations {
        eprintln!("warning: {v}");
    }
    write_json(a.json.as_ref(), || {
        Ok(serde_json::json!({ "n": instance.len(), "stats": s, "validation": report }).to_string())
    })
}

fn sortlb(a: SortlbArgs) -> Outcome {
    let algos = if a.algo.is_empty() {
        default_sortlb_algorithms(a.n, a.shape)
    } else {
        a.algo
    };
    let report = sortlb_check(a.n, a.seed, a.rate_max, a.shape, &algos)?;
    write_json(a.json.as_ref(), || Ok(serde_json::to_string_pretty(&report)?))?;
    let mut failed = Vec::new();
    for o in &report.outcomes {
        match &o.failure {
            None => println!("pass {}", o.algorithm),
            Some(msg) => {
                println!("FAIL {}", o.algorithm);
                failed.push(format!("{}: {msg}", o.algorithm));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(failed.join("\n")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Stats(a) => stats(a),
        Command::SortlbCheck(a) => sortlb(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
