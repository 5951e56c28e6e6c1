//! Self-check suites run by `mpclu verify`. Each check compares against an
//! exact rational or 8-component reference and reports a measured figure
//! next to the bound it was held to.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::complex::{ComplexScalar, Method};
use crate::complex_matmul::{cgemm, KernelChoice, RealKernel};
use crate::error::{Error, Result};
use crate::expansion::eft::{two_prod, two_prod_dekker, two_sum};
use crate::expansion::Expansion;
use crate::lu::{lu_blocked, lu_normal_with, max_rel_err, reconstruction_error, solve};
use crate::matrix::PlanarComplexMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Eft,
    Scalar,
    Matmul,
    Lu,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Eft, Suite::Scalar, Suite::Matmul, Suite::Lu];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Eft => "eft",
            Suite::Scalar => "scalar",
            Suite::Matmul => "matmul",
            Suite::Lu => "lu",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one check. `value` and `bound` are in the units named by
/// `unit` (usually multiples of the working `eps`).
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub unit: &'static str,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, bound: f64, unit: &'static str) -> Self {
        Self { name: name.into(), value, bound, unit }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {:.3e} {} (bound {:.3e})", self.name, self.value, self.unit, self.bound)
    }
}

/// Runs `suite` with inputs drawn from `seed`. `samples` scales the number
/// of random trials for the scalar suites.
pub fn run_suite(suite: Suite, seed: u64, samples: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Eft => eft(&mut rng, samples),
        Suite::Scalar => {
            let mut out = scalar::<2>(&mut rng, samples, "dd");
            out.extend(scalar::<3>(&mut rng, samples, "td"));
            out.extend(scalar::<4>(&mut rng, samples, "qd"));
            out
        }
        Suite::Matmul => {
            let mut out = matmul::<2>(&mut rng, "dd", 6);
            out.extend(matmul::<3>(&mut rng, "td", 8));
            out.extend(matmul::<4>(&mut rng, "qd", 12));
            out
        }
        Suite::Lu => {
            let mut out = lu::<2>(&mut rng, "dd", 6);
            out.extend(lu::<3>(&mut rng, "td", 8));
            out.extend(lu::<4>(&mut rng, "qd", 12));
            out
        }
    }
}

fn uniform(r: &mut ChaCha8Rng) -> f64 {
    (r.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Finite binary64 with random sign, mantissa and an exponent in `[-60, 60)`.
fn wide(r: &mut ChaCha8Rng) -> f64 {
    let e = (r.next_u64() % 120) as i32 - 60;
    let m = ((r.next_u64() >> 12) | (1 << 52)) as f64 * 2f64.powi(e - 52);
    if r.next_u64() & 1 == 1 {
        -m
    } else {
        m
    }
}

fn random_expansion<const K: usize>(r: &mut ChaCha8Rng) -> Expansion<K> {
    let terms: Vec<f64> = (0..=K)
        .map(|i| (2.0 * uniform(r) - 1.0) * 2f64.powi(-53 * i as i32))
        .collect();
    Expansion::renormalize(&terms)
}

fn random_cmatrix<const K: usize>(r: &mut ChaCha8Rng, n: usize) -> PlanarComplexMatrix<K> {
    PlanarComplexMatrix::from_fn(n, n, |_, _| ComplexScalar::new(random_expansion(r), random_expansion(r)))
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn eft(r: &mut ChaCha8Rng, samples: usize) -> Vec<Check> {
    let (mut sum_bad, mut prod_bad, mut dekker_bad) = (0usize, 0usize, 0usize);
    for _ in 0..samples {
        let (a, b) = (wide(r), wide(r));
        let (s, e) = two_sum(a, b);
        sum_bad += usize::from(rat(s) + rat(e) != rat(a) + rat(b));
        let (p, f) = two_prod(a, b);
        prod_bad += usize::from(rat(p) + rat(f) != rat(a) * rat(b));
        dekker_bad += usize::from(two_prod_dekker(a, b) != (p, f));
    }
    vec![
        Check::new(format!("two_sum exact on {samples} pairs"), sum_bad as f64, 0.0, "mismatches"),
        Check::new(format!("two_prod exact on {samples} pairs"), prod_bad as f64, 0.0, "mismatches"),
        Check::new("dekker product equals fma product", dekker_bad as f64, 0.0, "mismatches"),
    ]
}

fn rel8<const K: usize>(x: Expansion<K>, exact: Expansion<8>) -> f64 {
    let d = (x.convert::<8>() - exact).leading().abs();
    if exact.is_zero() {
        d
    } else {
        d / exact.leading().abs()
    }
}

fn scalar<const K: usize>(r: &mut ChaCha8Rng, samples: usize, tag: &str) -> Vec<Check> {
    let eps = Expansion::<K>::EPS;
    let (mut add, mut mul, mut div, mut m34) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut unnormalized, mut re_differs) = (0usize, 0usize);
    for _ in 0..samples {
        let (x, y) = (random_expansion::<K>(r), random_expansion::<K>(r));
        let (x8, y8) = (x.convert::<8>(), y.convert::<8>());
        let (s, p, q) = (x + y, x * y, x.div(y).unwrap_or(Expansion::ZERO));
        unnormalized += [s, p, q].iter().filter(|v| !v.is_normalized()).count();
        add = add.max(rel8(s, x8 + y8));
        mul = mul.max(rel8(p, x8 * y8));
        if !y.is_zero() {
            div = div.max(rel8(q, x8.div(y8).expect("nonzero")));
        }
        let (a, b) = (ComplexScalar::new(x, y), ComplexScalar::new(random_expansion(r), random_expansion(r)));
        let (c3, c4) = (a.mul_3m(b), a.mul_4m(b));
        re_differs += usize::from(c3.re != c4.re);
        let scale = a.modulus().leading() * b.modulus().leading();
        if scale > 0.0 {
            m34 = m34.max((c3.im - c4.im).leading().abs() / scale);
        }
    }
    vec![
        Check::new(format!("{tag} add"), add / eps, 2.0, "eps"),
        Check::new(format!("{tag} mul"), mul / eps, 4.0, "eps"),
        Check::new(format!("{tag} div"), div / eps, 8.0, "eps"),
        Check::new(format!("{tag} results normalized"), unnormalized as f64, 0.0, "violations"),
        Check::new(format!("{tag} 3m vs 4m imaginary part"), m34 / eps, 8.0, "eps |a||b|"),
        Check::new(format!("{tag} 3m vs 4m real part bitwise"), re_differs as f64, 0.0, "mismatches"),
    ]
}

fn kernels(splits: usize) -> [RealKernel; 4] {
    [RealKernel::Naive, RealKernel::blocked(), RealKernel::strassen(), RealKernel::Ozaki { splits }]
}

fn matmul<const K: usize>(r: &mut ChaCha8Rng, tag: &str, splits: usize) -> Vec<Check> {
    let n = 48;
    let eps = Expansion::<K>::EPS;
    let (a, b) = (random_cmatrix::<K>(r, n), random_cmatrix::<K>(r, n));
    let reference = cgemm(&a.convert::<8>(), &b.convert::<8>(), &KernelChoice::new(Method::FourM, RealKernel::Naive))
        .expect("square operands");
    let scale = n as f64 * a.max_abs1() * b.max_abs1();
    let mut out = Vec::new();
    for kernel in kernels(splits) {
        for method in [Method::ThreeM, Method::FourM] {
            let kc = KernelChoice::new(method, kernel);
            let c = cgemm(&a, &b, &kc).expect("valid kernel");
            let dev = c
                .convert::<8>()
                .sub(&reference)
                .map(|d| d.max_abs1())
                .expect("same shape");
            out.push(Check::new(format!("{tag} {method} {kernel} n={n}"), dev / (scale * eps), 32.0, "n eps |A||B|"));
            let moved = [2, 8]
                .into_iter()
                .filter(|&t| cgemm(&a, &b, &kc.with_threads(t)).expect("valid kernel") != c)
                .count();
            out.push(Check::new(format!("{tag} {method} {kernel} thread invariance"), moved as f64, 0.0, "mismatches"));
        }
    }
    out
}

fn lu<const K: usize>(r: &mut ChaCha8Rng, tag: &str, splits: usize) -> Vec<Check> {
    let n = 40;
    let eps = Expansion::<K>::EPS;
    let a = random_cmatrix::<K>(r, n);
    let bound = 64.0;
    let scale = a.max_abs1() * eps;
    let mut out = Vec::new();
    let normal = lu_normal_with(&a, Method::ThreeM, 1);
    let Ok(normal) = normal else {
        out.push(Check::new(format!("{tag} normal lu"), f64::INFINITY, bound, "eps max|A|"));
        return out;
    };
    out.push(Check::new(
        format!("{tag} normal lu reconstruction"),
        reconstruction_error::<K, 8>(&a, &normal) / scale,
        bound,
        "eps max|A|",
    ));
    for kernel in kernels(splits) {
        let kc = KernelChoice::new(Method::ThreeM, kernel);
        let value = match lu_blocked(&a, 16, &kc, 1) {
            Ok(f) => reconstruction_error::<K, 8>(&a, &f) / scale,
            Err(_) => f64::INFINITY,
        };
        out.push(Check::new(format!("{tag} blocked lu ({kernel}) reconstruction"), value, bound, "eps max|A|"));
    }
    let full = lu_blocked(&a, n, &KernelChoice::new(Method::ThreeM, RealKernel::Naive), 1);
    let same = matches!(&full, Ok(f) if *f == normal);
    out.push(Check::new(format!("{tag} blocked with K = n equals normal"), f64::from(u8::from(!same)), 0.0, "mismatches"));

    let p = crate::bench::gen_problem::<K>(n, r.next_u64());
    let err = lu_normal_with(&p.a, Method::ThreeM, 1)
        .and_then(|f| solve(&f, &p.b))
        .and_then(|x| max_rel_err(&x, &p.x))
        .map(|e| e.leading() / eps)
        .unwrap_or(f64::INFINITY);
    out.push(Check::new(format!("{tag} benchmark system solve, n={n}"), err, 1e4, "eps"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass() {
        for suite in Suite::ALL {
            for c in run_suite(suite, 3, 200) {
                assert!(c.passed(), "{c}");
            }
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("LU".parse::<Suite>().unwrap(), Suite::Lu);
        assert!("blas".parse::<Suite>().is_err());
        let c = Check::new("x", 2.0, 1.0, "eps");
        assert!(!c.passed());
        assert!(c.to_string().starts_with("FAIL x"));
    }
}
