//! Browser bindings. Each export takes plain values and returns a JSON
//! string; errors come back as JS exceptions carrying the message.

use mpclu::bench::{gen_matrix, gen_problem, solve_case, Algorithm, Precision};
use mpclu::complex_matmul::{cgemm, KernelChoice, RealKernel};
use mpclu::{ComplexScalar, Expansion, Method, PlanarComplexMatrix, RealMatrix};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[cfg(target_arch = "wasm32")]
fn now_ms() -> f64 {
    js_sys::Date::now()
}

#[cfg(not(target_arch = "wasm32"))]
fn now_ms() -> f64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64() * 1e3)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = now_ms();
    let out = f();
    (out, now_ms() - start)
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

fn precision(s: &str) -> Result<Precision, String> {
    s.parse().map_err(|e: mpclu::Error| e.to_string())
}

macro_rules! dispatch {
    ($prec:expr, $f:ident($($arg:expr),*)) => {
        match $prec {
            Precision::Dd => $f::<2>($($arg),*),
            Precision::Td => $f::<3>($($arg),*),
            Precision::Qd => $f::<4>($($arg),*),
        }
    };
}

#[derive(Serialize)]
struct Arith {
    precision: &'static str,
    digits: usize,
    sum: String,
    difference: String,
    product: String,
    quotient: String,
    /// Leading-to-trailing binary64 components of the quotient.
    quotient_components: Vec<f64>,
    binary64: [f64; 4],
}

fn arith_k<const K: usize>(prec: Precision, a: &str, b: &str) -> Result<String, String> {
    let parse = |s: &str| s.trim().parse::<Expansion<K>>().map_err(|e| e.to_string());
    let (x, y) = (parse(a)?, parse(b)?);
    let q = x.div(y).map_err(|e| e.to_string())?;
    let digits = Expansion::<K>::decimal_digits();
    let (xf, yf) = (x.to_f64(), y.to_f64());
    let out = Arith {
        precision: prec.as_str(),
        digits,
        sum: (x + y).to_decimal(digits),
        difference: (x - y).to_decimal(digits),
        product: (x * y).to_decimal(digits),
        quotient: q.to_decimal(digits),
        quotient_components: q.components().to_vec(),
        binary64: [xf + yf, xf - yf, xf * yf, xf / yf],
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// `a + b`, `a - b`, `a b` and `a / b` for decimal strings at `prec`
/// (`dd`, `td` or `qd`), next to the binary64 results.
pub fn arithmetic(prec: &str, a: &str, b: &str) -> Result<String, String> {
    let p = precision(prec)?;
    dispatch!(p, arith_k(p, a, b))
}

#[derive(Serialize)]
struct Product {
    method: &'static str,
    milliseconds: f64,
    /// Largest entrywise deviation from the reference, in units of
    /// `n max|A| max|B| eps`.
    error_eps: f64,
}

fn max_dev<const K: usize>(x: &RealMatrix<K>, y: &RealMatrix<8>) -> f64 {
    x.iter().zip(y.iter()).map(|(u, v)| (u.convert::<8>() - v).leading().abs()).fold(0.0, f64::max)
}

/// Divides every entry by 3 so that all `K` components are populated;
/// binary64 entries would make many products exact.
fn full_width<const K: usize>(m: PlanarComplexMatrix<K>) -> PlanarComplexMatrix<K> {
    let third = Expansion::<K>::ONE.div(Expansion::from(3.0)).expect("nonzero");
    PlanarComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let z = m.get(i, j);
        ComplexScalar::new(z.re * third, z.im * third)
    })
}

fn matmul_k<const K: usize>(n: usize, seed: u64, kernel: RealKernel) -> Result<String, String> {
    let a = full_width(gen_matrix::<K>(n, seed));
    let b = full_width(gen_matrix::<K>(n, seed.wrapping_add(1)));
    let reference = cgemm(&a.convert::<8>(), &b.convert::<8>(), &KernelChoice::new(Method::FourM, RealKernel::Naive))
        .map_err(|e| e.to_string())?;
    let scale = n as f64 * a.max_abs1() * b.max_abs1() * Expansion::<K>::EPS;
    let mut rows = Vec::new();
    for method in [Method::ThreeM, Method::FourM] {
        let (c, ms) = timed(|| cgemm(&a, &b, &KernelChoice::new(method, kernel)));
        let c = c.map_err(|e| e.to_string())?;
        let dev = max_dev(&c.re, &reference.re).max(max_dev(&c.im, &reference.im));
        rows.push(Product { method: method.as_str(), milliseconds: ms, error_eps: dev / scale });
    }
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

fn kernel(name: &str, splits: usize) -> Result<RealKernel, String> {
    match name.parse::<RealKernel>().map_err(|e| e.to_string())? {
        RealKernel::Ozaki { .. } => Ok(RealKernel::Ozaki { splits }),
        k => Ok(k),
    }
}

/// 3M and 4M products of two seeded `n x n` matrices with the named real
/// kernel, timed and compared with an 8-component reference.
pub fn compare_products(prec: &str, n: usize, seed: u64, kernel_name: &str, splits: usize) -> Result<String, String> {
    let p = precision(prec)?;
    if !(1..=256).contains(&n) {
        return Err("n must be between 1 and 256".into());
    }
    let k = kernel(kernel_name, splits)?;
    KernelChoice::new(Method::ThreeM, k).validate_for(n).map_err(|e| e.to_string())?;
    dispatch!(p, matmul_k(n, seed, k))
}

#[derive(Serialize)]
struct Solve {
    algorithm: &'static str,
    block: usize,
    milliseconds: f64,
    /// `max |x_hat - x| / |x|` in units of eps.
    error_eps: f64,
}

fn solve_k<const K: usize>(n: usize, seed: u64, blocks: &[usize], kc: &KernelChoice) -> Result<String, String> {
    let p = gen_problem::<K>(n, seed);
    let mut rows = Vec::new();
    let cases = std::iter::once((Algorithm::Normal, n)).chain(blocks.iter().map(|&b| (Algorithm::Blocked, b)));
    for (algorithm, block) in cases {
        let (r, ms) = timed(|| solve_case(&p, algorithm, block, kc, 1));
        let r = r.map_err(|e| e.to_string())?;
        rows.push(Solve {
            algorithm: algorithm.as_str(),
            block,
            milliseconds: ms,
            error_eps: r.max_relerr.leading() / Expansion::<K>::EPS,
        });
    }
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

/// Solves the seeded benchmark system (`x_k = k + k i`) with normal LU and
/// with blocked LU at each panel width in `blocks`.
pub fn solve_system(
    prec: &str,
    n: usize,
    seed: u64,
    method: &str,
    kernel_name: &str,
    splits: usize,
    blocks: &[usize],
) -> Result<String, String> {
    let p = precision(prec)?;
    if !(1..=192).contains(&n) {
        return Err("n must be between 1 and 192".into());
    }
    if let Some(b) = blocks.iter().find(|&&b| b == 0 || b > n) {
        return Err(format!("panel width {b} outside [1, {n}]"));
    }
    let method: Method = method.parse().map_err(|e: mpclu::Error| e.to_string())?;
    let kc = KernelChoice::new(method, kernel(kernel_name, splits)?);
    for &b in blocks {
        kc.validate_for(b).map_err(|e| e.to_string())?;
    }
    dispatch!(p, solve_k(n, seed, blocks, &kc))
}

#[wasm_bindgen(js_name = arithmetic)]
pub fn arithmetic_js(prec: &str, a: &str, b: &str) -> Result<String, JsValue> {
    to_js(arithmetic(prec, a, b))
}

#[wasm_bindgen(js_name = compareProducts)]
pub fn compare_products_js(prec: &str, n: usize, seed: u32, kernel: &str, splits: usize) -> Result<String, JsValue> {
    to_js(compare_products(prec, n, seed.into(), kernel, splits))
}

#[wasm_bindgen(js_name = solveSystem)]
pub fn solve_system_js(
    prec: &str,
    n: usize,
    seed: u32,
    method: &str,
    kernel: &str,
    splits: usize,
    blocks: Vec<usize>,
) -> Result<String, JsValue> {
    to_js(solve_system(prec, n, seed.into(), method, kernel, splits, &blocks))
}
