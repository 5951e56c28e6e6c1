//! `mpclu`: benchmark sweeps and self-checks for the mpclu library.
//!
//! Exit codes: 0 success, 1 invalid configuration or I/O failure,
//! 2 singular matrix under `--strict`, 3 failed verification (a failed
//! `verify` check, or a `verify_failed` row under `--strict`).

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use mpclu::bench::{k_sweep, run_bench, write_csv, Algorithm, BenchConfig, BenchRecord, Precision, Status};
use mpclu::complex_matmul::RealKernel;
use mpclu::verify::{run_suite, Suite};
use mpclu::Method;

const EXIT_CONFIG: u8 = 1;
const EXIT_SINGULAR: u8 = 2;
const EXIT_CHECK: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mpclu", version, about = "Multiple-precision complex LU benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor and solve a seeded system over a sweep of panel widths and thread counts.
    Bench(BenchArgs),
    /// Time the complex matrix product alone.
    MatmulBench(KernelArgs),
    /// Run invariant suites and print one PASS/FAIL line per check.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct KernelArgs {
    /// Working precision: dd, td or qd.
    #[arg(long, default_value = "dd")]
    prec: Precision,
    /// Complex product: 3m or 4m.
    #[arg(long, default_value = "3m")]
    method: Method,
    /// Real kernel: naive, blocked, strassen or ozaki.
    #[arg(long, default_value = "blocked")]
    kernel: String,
    /// Matrix order.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Ozaki split count (default depends on precision).
    #[arg(long)]
    splits: Option<usize>,
    /// Cache block size for the blocked and Strassen kernels.
    #[arg(long)]
    block: Option<usize>,
    /// Strassen recursion cutoff.
    #[arg(long)]
    threshold: Option<usize>,
    /// Comma-separated thread counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    threads: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Repetitions per configuration; the median time is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Check results against a reference.
    #[arg(long)]
    verify: bool,
    /// Output file; CSV goes to stdout when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Exit nonzero when any case is singular or fails verification.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// LU variant: normal or blocked.
    #[arg(long, default_value = "blocked", value_parser = ["normal", "blocked"])]
    algo: String,
    /// Panel widths as LO:HI:STEP.
    #[arg(long, value_parser = parse_sweep)]
    k_sweep: Option<Sweep>,
    #[command(flatten)]
    common: KernelArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// eft, scalar, matmul, lu or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random cases per scalar check.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

#[derive(Clone, Debug)]
struct Sweep(Vec<usize>);

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err("expected LO:HI:STEP".into());
    };
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let ks = k_sweep(num(lo)?, num(hi)?, num(step)?);
    if ks.is_empty() {
        return Err("empty sweep; need 1 <= LO <= HI and STEP >= 1".into());
    }
    Ok(Sweep(ks))
}

fn kernel(args: &KernelArgs) -> Result<RealKernel, String> {
    let base: RealKernel = args.kernel.parse().map_err(|e| format!("{e}"))?;
    Ok(match base {
        RealKernel::Naive => RealKernel::Naive,
        RealKernel::Blocked { block } => RealKernel::Blocked { block: args.block.unwrap_or(block) },
        RealKernel::Strassen { threshold, block } => RealKernel::Strassen {
            threshold: args.threshold.unwrap_or(threshold),
            block: args.block.unwrap_or(block),
        },
        RealKernel::Ozaki { .. } => {
            RealKernel::Ozaki { splits: args.splits.unwrap_or_else(|| args.prec.default_splits()) }
        }
    })
}

fn config(args: &KernelArgs, algorithm: Algorithm) -> Result<BenchConfig, String> {
    let mut cfg = BenchConfig::new(args.prec, algorithm, args.n);
    cfg.method = args.method;
    cfg.kernel = kernel(args)?;
    cfg.threads = args.threads.clone();
    cfg.seed = args.seed;
    cfg.reps = args.reps;
    cfg.verify = args.verify;
    Ok(cfg)
}

fn emit(records: &[BenchRecord], args: &KernelArgs) -> Result<(), String> {
    let res = match &args.csv {
        Some(path) => mpclu::bench::emit_csv(records, path),
        None => write_csv(records, io::stdout().lock()),
    };
    res.map_err(|e| format!("writing CSV: {e}"))
}

fn strict_code(records: &[BenchRecord]) -> u8 {
    if records.iter().any(|r| r.status == Status::Singular) {
        EXIT_SINGULAR
    } else if records.iter().any(|r| r.status == Status::VerifyFailed) {
        EXIT_CHECK
    } else {
        0
    }
}

fn bench(cfg: BenchConfig, args: &KernelArgs) -> Result<u8, String> {
    let records = run_bench(&cfg).map_err(|e| e.to_string())?;
    emit(&records, args)?;
    Ok(if args.strict { strict_code(&records) } else { 0 })
}

fn verify(args: &VerifyArgs) -> Result<u8, String> {
    let suites = if args.suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse::<Suite>().map_err(|e| e.to_string())?]
    };
    if args.samples == 0 {
        return Err("samples must be at least 1".into());
    }
    let mut out = io::stdout().lock();
    let mut failed = 0;
    for suite in suites {
        for check in run_suite(suite, args.seed, args.samples) {
            failed += usize::from(!check.passed());
            writeln!(out, "[{suite}] {check}").map_err(|e| e.to_string())?;
        }
    }
    Ok(if failed == 0 { 0 } else { EXIT_CHECK })
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Bench(args) => {
            let algorithm = if args.algo == "normal" { Algorithm::Normal } else { Algorithm::Blocked };
            let mut cfg = config(&args.common, algorithm)?;
            if let Some(Sweep(ks)) = args.k_sweep {
                cfg.ks = ks;
            }
            bench(cfg, &args.common)
        }
        Command::MatmulBench(args) => bench(config(&args, Algorithm::Matmul)?, &args),
        Command::Verify(args) => verify(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("mpclu: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
