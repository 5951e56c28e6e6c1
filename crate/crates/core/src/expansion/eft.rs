//! Error-free transformations on binary64.
//!
//! Every function here returns a rounded result together with its exact
//! rounding error, so that `hi + lo` equals the mathematically exact result
//! for all finite inputs whose result does not overflow (and, for products,
//! whose error term does not underflow).

/// Dekker's splitting constant, `2^27 + 1`.
const SPLITTER: f64 = 134_217_729.0;

/// Knuth's branch-free two-sum: `s = fl(a + b)` and `s + e = a + b` exactly.
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Dekker's fast two-sum. Exact only when `a == 0` or `exponent(a) >= exponent(b)`.
#[inline(always)]
pub fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// `p = fl(a * b)` and `p + e = a * b` exactly.
///
/// Uses a fused multiply-add when the target has one and Dekker's splitting
/// otherwise; both paths give the same pair.
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    #[cfg(target_feature = "fma")]
    {
        two_prod_fma(a, b)
    }
    #[cfg(not(target_feature = "fma"))]
    {
        two_prod_dekker(a, b)
    }
}

#[inline(always)]
pub fn two_prod_fma(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker/Veltkamp product. Valid for `|a|, |b| < 2^996`.
#[inline(always)]
pub fn two_prod_dekker(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// `a * b + c` with a single rounding where the hardware supports it.
#[inline(always)]
pub(crate) fn fmadd(a: f64, b: f64, c: f64) -> f64 {
    #[cfg(target_feature = "fma")]
    {
        a.mul_add(b, c)
    }
    #[cfg(not(target_feature = "fma"))]
    {
        a * b + c
    }
}
