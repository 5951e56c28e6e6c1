//! Benchmark linear systems: random `[0, 1)` matrices, the exact solution
//! `x_k = k + k i`, and a right-hand side formed at reference precision.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::complex::ComplexScalar;
use crate::matrix::{ComplexVector, PlanarComplexMatrix};

/// A benchmark system `A x = b` with known `x`.
#[derive(Clone, Debug)]
pub struct Problem<const K: usize> {
    pub a: PlanarComplexMatrix<K>,
    pub b: ComplexVector<K>,
    pub x: ComplexVector<K>,
}

/// Entry `(i, j)` of plane `plane` (0 real, 1 imaginary) for `seed`.
///
/// ChaCha8 keyed by `seed`, stream `plane`; entry `i n + j` is the 64-bit
/// draw at 32-bit word position `2 (i n + j)`, keeping its top 53 bits.
/// Any entry can be produced independently of the others.
pub fn entry(seed: u64, n: usize, plane: u64, i: usize, j: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(plane);
    rng.set_word_pos(2 * (i * n + j) as u128);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n x n` matrix with real and imaginary parts uniform in `[0, 1)`.
pub fn gen_matrix<const K: usize>(n: usize, seed: u64) -> PlanarComplexMatrix<K> {
    let plane = |p: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p);
        let vals: Vec<f64> = (0..n * n)
            .map(|_| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
            .collect();
        crate::matrix::RealMatrix::from_f64(n, n, &vals).expect("shape")
    };
    PlanarComplexMatrix { re: plane(0), im: plane(1) }
}

/// `x_k = k + k i` for `k = 1..=n`.
pub fn true_solution<const K: usize>(n: usize) -> ComplexVector<K> {
    ComplexVector::from_fn(n, |i| ComplexScalar::from_f64((i + 1) as f64, (i + 1) as f64))
}

/// `b = A x` with every operand promoted to 8-component precision and
/// naive 4M dot products, then rounded to `K` components.
pub fn reference_rhs<const K: usize>(a: &PlanarComplexMatrix<K>, x: &ComplexVector<K>) -> ComplexVector<K> {
    let a8 = a.convert::<8>();
    let x8 = x.convert::<8>();
    ComplexVector::from_fn(a.rows(), |i| {
        let s = (0..a.cols()).fold(ComplexScalar::<8>::ZERO, |s, k| s + a8.get(i, k).mul_4m(x8.get(k)));
        s.convert::<K>()
    })
}

pub fn gen_problem<const K: usize>(n: usize, seed: u64) -> Problem<K> {
    let a = gen_matrix(n, seed);
    let x = true_solution(n);
    let b = reference_rhs(&a, &x);
    Problem { a, b, x }
}
