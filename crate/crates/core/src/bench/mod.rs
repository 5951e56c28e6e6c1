//! Benchmark protocol: generate a system, factor and solve it, compare with
//! the known solution, and record one row per configuration.

pub mod problem;
mod record;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use problem::{entry, gen_matrix, gen_problem, reference_rhs, true_solution, Problem};
pub use record::{emit_csv, read_csv, write_csv, BenchRecord, CSV_COLUMNS};

use crate::complex::Method;
use crate::complex_matmul::{cgemm, KernelChoice, RealKernel};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::lu::{lu_blocked, lu_normal_with, max_rel_err, reconstruction_error, solve, LuFactors};
use crate::matrix::ComplexVector;
use crate::real_matmul::split_beta;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Dd,
    Td,
    Qd,
}

impl Precision {
    pub const ALL: [Precision; 3] = [Precision::Dd, Precision::Td, Precision::Qd];

    pub fn components(self) -> usize {
        match self {
            Self::Dd => 2,
            Self::Td => 3,
            Self::Qd => 4,
        }
    }

    pub fn eps(self) -> f64 {
        match self {
            Self::Dd => Expansion::<2>::EPS,
            Self::Td => Expansion::<3>::EPS,
            Self::Qd => Expansion::<4>::EPS,
        }
    }

    /// Ozaki split count used when none is given.
    pub fn default_splits(self) -> usize {
        match self {
            Self::Dd => 6,
            Self::Td => 8,
            Self::Qd => 12,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Dd => "dd",
            Self::Td => "td",
            Self::Qd => "qd",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dd" => Ok(Self::Dd),
            "td" => Ok(Self::Td),
            "qd" => Ok(Self::Qd),
            _ => Err(Error::InvalidParameter(format!("unknown precision {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Normal,
    Blocked,
    /// Matrix product only (no factorization).
    Matmul,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Normal => "normal",
            Self::Blocked => "blocked",
            Self::Matmul => "matmul",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" => Ok(Self::Normal),
            "blocked" => Ok(Self::Blocked),
            "matmul" => Ok(Self::Matmul),
            _ => Err(Error::InvalidParameter(format!("unknown algorithm {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Singular,
    VerifyFailed,
}

/// `lo, lo + step, ...` up to `hi` inclusive.
pub fn k_sweep(lo: usize, hi: usize, step: usize) -> Vec<usize> {
    if step == 0 || lo == 0 || lo > hi {
        return Vec::new();
    }
    (lo..=hi).step_by(step).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub precision: Precision,
    pub algorithm: Algorithm,
    pub method: Method,
    pub kernel: RealKernel,
    pub n: usize,
    /// Panel widths for the blocked algorithm; ignored otherwise.
    pub ks: Vec<usize>,
    pub threads: Vec<usize>,
    pub seed: u64,
    pub reps: usize,
    /// Check `P A = L U` after each factorization.
    pub verify: bool,
}

impl BenchConfig {
    /// Defaults: 3M, blocked real kernel, panel widths 32, 64, ... up to
    /// `n`, one thread, seed 1, three repetitions.
    pub fn new(precision: Precision, algorithm: Algorithm, n: usize) -> Self {
        let ks = match k_sweep(32, n, 32) {
            v if v.is_empty() => vec![n],
            v => v,
        };
        Self {
            precision,
            algorithm,
            method: Method::ThreeM,
            kernel: RealKernel::blocked(),
            n,
            ks,
            threads: vec![1],
            seed: 1,
            reps: 3,
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.reps == 0 {
            return bad("repetitions must be at least 1".into());
        }
        if self.threads.is_empty() || self.threads.contains(&0) {
            return bad("thread counts must be at least 1".into());
        }
        self.kernel.validate()?;
        match self.algorithm {
            Algorithm::Blocked => {
                if self.ks.is_empty() {
                    return bad("empty K sweep".into());
                }
                if let Some(k) = self.ks.iter().find(|&&k| k == 0 || k > self.n) {
                    return bad(format!("K = {k} outside [1, {}]", self.n));
                }
                if let RealKernel::Ozaki { .. } = self.kernel {
                    for &k in &self.ks {
                        split_beta(k)?;
                    }
                }
            }
            Algorithm::Matmul => {
                if let RealKernel::Ozaki { .. } = self.kernel {
                    split_beta(self.n)?;
                }
            }
            Algorithm::Normal => {}
        }
        Ok(())
    }

    fn kernel_choice(&self) -> KernelChoice {
        KernelChoice::new(self.method, self.kernel)
    }
}

/// Outcome of one factor-and-solve.
#[derive(Clone, Debug)]
pub struct CaseResult<const K: usize> {
    pub factors: LuFactors<K>,
    pub x: ComplexVector<K>,
    pub max_relerr: Expansion<K>,
}

/// Factors and solves `p` once. `block` is ignored for [`Algorithm::Normal`].
pub fn solve_case<const K: usize>(
    p: &Problem<K>,
    algorithm: Algorithm,
    block: usize,
    kc: &KernelChoice,
    threads: usize,
) -> Result<CaseResult<K>> {
    let factors = match algorithm {
        Algorithm::Normal => lu_normal_with(&p.a, kc.method, threads)?,
        Algorithm::Blocked => lu_blocked(&p.a, block, kc, threads)?,
        Algorithm::Matmul => return Err(Error::InvalidParameter("not an LU algorithm".into())),
    };
    let x = solve(&factors, &p.b)?;
    let max_relerr = max_rel_err(&x, &p.x)?;
    Ok(CaseResult { factors, x, max_relerr })
}

/// Runs every `(K, threads)` combination of `cfg`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    match cfg.precision {
        Precision::Dd => run::<2>(cfg),
        Precision::Td => run::<3>(cfg),
        Precision::Qd => run::<4>(cfg),
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn record(cfg: &BenchConfig, k: usize, threads: usize, seconds: f64, err: String, status: Status) -> BenchRecord {
    let uses_kernel = cfg.algorithm != Algorithm::Normal;
    BenchRecord {
        precision: cfg.precision,
        algorithm: cfg.algorithm,
        method: cfg.method,
        kernel: if uses_kernel { cfg.kernel.name().to_string() } else { "none".to_string() },
        n: cfg.n,
        k,
        splits: if uses_kernel { cfg.kernel.splits() } else { None },
        threads,
        rep_median_seconds: seconds,
        max_relerr: err,
        seed: cfg.seed,
        status,
    }
}

fn format_err<const K: usize>(e: Expansion<K>) -> String {
    e.to_decimal(8)
}

fn run<const K: usize>(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.algorithm == Algorithm::Matmul {
        return run_matmul::<K>(cfg);
    }
    let p = gen_problem::<K>(cfg.n, cfg.seed);
    let kc = cfg.kernel_choice();
    let ks = match cfg.algorithm {
        Algorithm::Blocked => cfg.ks.clone(),
        _ => vec![cfg.n],
    };
    let scale = p.a.max_abs1();
    let mut out = Vec::new();
    for &k in &ks {
        for &t in &cfg.threads {
            let mut times = Vec::with_capacity(cfg.reps);
            let mut last = None;
            for _ in 0..cfg.reps {
                let start = Instant::now();
                let r = solve_case(&p, cfg.algorithm, k, &kc, t);
                times.push(start.elapsed().as_secs_f64());
                last = Some(r);
            }
            let seconds = median(times).max(f64::MIN_POSITIVE);
            let rec = match last.expect("reps >= 1") {
                Ok(r) => {
                    let ok = !cfg.verify
                        || reconstruction_error::<K, 8>(&p.a, &r.factors) <= 64.0 * Expansion::<K>::EPS * scale;
                    let status = if ok { Status::Ok } else { Status::VerifyFailed };
                    record(cfg, k, t, seconds, format_err(r.max_relerr), status)
                }
                Err(Error::SingularMatrix { .. }) | Err(Error::SingularScalarDivide) => {
                    record(cfg, k, t, seconds, "inf".into(), Status::Singular)
                }
                Err(e) => return Err(e),
            };
            out.push(rec);
        }
    }
    Ok(out)
}

/// Times `C = A B` for random `[0, 1)` operands. With `verify`, the error
/// column is the largest entrywise deviation from the 4M naive product,
/// relative to `n max|A| max|B|`; otherwise it is `nan`.
fn run_matmul<const K: usize>(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let a = gen_matrix::<K>(cfg.n, cfg.seed);
    let b = gen_matrix::<K>(cfg.n, cfg.seed.wrapping_add(1));
    let reference = if cfg.verify {
        Some(cgemm(&a, &b, &KernelChoice::new(Method::FourM, RealKernel::Naive))?)
    } else {
        None
    };
    let mut out = Vec::new();
    for &t in &cfg.threads {
        let kc = cfg.kernel_choice().with_threads(t);
        let mut times = Vec::with_capacity(cfg.reps);
        let mut c = None;
        for _ in 0..cfg.reps {
            let start = Instant::now();
            let r = cgemm(&a, &b, &kc)?;
            times.push(start.elapsed().as_secs_f64());
            c = Some(r);
        }
        let c = c.expect("reps >= 1");
        let err = match &reference {
            Some(r) => {
                let scale = cfg.n as f64 * a.max_abs1() * b.max_abs1();
                let dev = |x: &crate::matrix::RealMatrix<K>, y: &crate::matrix::RealMatrix<K>| {
                    x.iter().zip(y.iter()).map(|(u, v)| (u - v).leading().abs()).fold(0.0, f64::max)
                };
                format!("{:.8e}", dev(&c.re, &r.re).max(dev(&c.im, &r.im)) / scale)
            }
            None => "nan".into(),
        };
        let mut rec = record(cfg, cfg.n, t, median(times).max(f64::MIN_POSITIVE), err, Status::Ok);
        rec.splits = cfg.kernel.splits();
        out.push(rec);
    }
    Ok(out)
}
