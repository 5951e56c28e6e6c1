#![allow(dead_code)]

use mpclu::Expansion;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(r: &mut ChaCha8Rng) -> f64 {
    (r.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Random binary64 with a uniformly random exponent in `[lo, hi)`.
pub fn wide_f64(r: &mut ChaCha8Rng, lo: i32, hi: i32) -> f64 {
    let span = (hi - lo) as u64;
    let e = lo + (r.next_u64() % span) as i32;
    let mant = (r.next_u64() >> 12) | (1u64 << 52);
    let sign = if r.next_u64() & 1 == 1 { -1.0 } else { 1.0 };
    sign * mant as f64 * 2f64.powi(e - 52)
}

/// Random `K`-term expansion: leading term in [0.5, 1) times a random power
/// of two in `[-8, 8)`, every lower term a random-signed fraction of the
/// previous term's round-off.
pub fn random_expansion<const K: usize>(r: &mut ChaCha8Rng) -> Expansion<K> {
    let scale = 2f64.powi((r.next_u64() % 16) as i32 - 8);
    let mut terms = Vec::with_capacity(K + 1);
    for i in 0..=K {
        let sign = if r.next_u64() & 1 == 1 { -1.0 } else { 1.0 };
        let mag = if i == 0 { 0.5 + 0.5 * uniform(r) } else { uniform(r) };
        terms.push(sign * mag * scale * 2f64.powi(-53 * i as i32));
    }
    Expansion::<K>::renormalize(&terms)
}

pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

pub fn exp_rat<const K: usize>(x: &Expansion<K>) -> BigRational {
    x.components().iter().fold(BigRational::zero(), |acc, &c| acc + rat(c))
}

/// |approx - exact| / |exact| as binary64 (0 when both are zero).
pub fn rel_err(approx: &BigRational, exact: &BigRational) -> f64 {
    let diff = (approx - exact).abs();
    if exact.is_zero() {
        return if diff.is_zero() { 0.0 } else { f64::INFINITY };
    }
    ratio_to_f64(&(diff / exact.abs()))
}

/// Converts a rational to binary64 without overflowing intermediate ints.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let n = q.numer().abs();
    let d = q.denom().clone();
    let shift = n.bits() as i64 - d.bits() as i64 - 60;
    let v = if shift >= 0 {
        (&n / (&d << shift as usize)).to_f64().unwrap() * 2f64.powi(shift as i32)
    } else {
        let s = (-shift) as usize;
        let int: BigInt = (&n << s) / &d;
        let mut v = int.to_f64().unwrap();
        let mut rem = s as i32;
        while rem > 1000 {
            v *= 2f64.powi(-1000);
            rem -= 1000;
        }
        v * 2f64.powi(-rem)
    };
    if q.is_negative() {
        -v
    } else {
        v
    }
}

pub fn random_complex<const K: usize>(r: &mut ChaCha8Rng) -> mpclu::ComplexScalar<K> {
    mpclu::ComplexScalar::new(random_expansion(r), random_expansion(r))
}

/// Modulus as binary64, good to a few ulps.
pub fn modulus<const K: usize>(z: &mpclu::ComplexScalar<K>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

/// Full-precision value uniform in `[0, 1)`: one uniform draw per component.
pub fn unit_expansion<const K: usize>(r: &mut ChaCha8Rng) -> Expansion<K> {
    let terms: Vec<f64> = (0..=K).map(|i| uniform(r) * 2f64.powi(-53 * i as i32)).collect();
    Expansion::<K>::renormalize(&terms)
}

pub fn random_matrix<const K: usize>(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> mpclu::RealMatrix<K> {
    mpclu::RealMatrix::from_fn(rows, cols, |_, _| unit_expansion(r))
}

pub fn random_cmatrix<const K: usize>(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> mpclu::PlanarComplexMatrix<K> {
    mpclu::PlanarComplexMatrix::from_fn(rows, cols, |_, _| mpclu::ComplexScalar::new(unit_expansion(r), unit_expansion(r)))
}

/// Largest `|x - y| / |y|` over entries, measured at reference precision.
pub fn max_rel_dev<const K: usize, const J: usize>(x: &mpclu::RealMatrix<K>, y: &mpclu::RealMatrix<J>) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| {
            let b8 = b.convert::<8>();
            let d = (a.convert::<8>() - b8).leading().abs();
            if b8.is_zero() { d } else { d / b8.leading().abs() }
        })
        .fold(0.0, f64::max)
}

/// Largest `|x - y|` over entries, measured at reference precision.
pub fn max_abs_dev<const K: usize, const J: usize>(x: &mpclu::RealMatrix<K>, y: &mpclu::RealMatrix<J>) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(a, b)| (a.convert::<8>() - b.convert::<8>()).leading().abs())
        .fold(0.0, f64::max)
}
