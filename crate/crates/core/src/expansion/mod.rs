//! Fixed-length floating-point expansions.
//!
//! An [`Expansion<K>`] stores one extended-precision real as an unevaluated
//! sum of `K` binary64 values, most significant first. `K = 2, 3, 4` give
//! double-double, triple-double and quad-double; `K = 8` (~424 bits) is used
//! as the reference precision when measuring errors.

mod decimal;
pub mod eft;
mod renorm;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use eft::{fast_two_sum, fmadd, two_prod, two_sum};
use renorm::{renormalize_in_place, renormalize_unordered, SCRATCH};

/// Largest supported component count.
pub const MAX_COMPONENTS: usize = 8;

#[derive(Clone, Copy, PartialEq)]
pub struct Expansion<const K: usize>([f64; K]);

pub type DoubleDouble = Expansion<2>;
pub type TripleDouble = Expansion<3>;
pub type QuadDouble = Expansion<4>;
/// Reference precision for error measurement.
pub type Reference = Expansion<8>;

/// `2^e` for `e` in the normal exponent range.
#[inline]
pub(crate) fn pow2(e: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&e));
    f64::from_bits(((e + 1023) as u64) << 52)
}

/// Exponent `e` with `2^(e-1) <= |x| < 2^e`, for finite nonzero normal `x`.
#[inline]
pub(crate) fn exponent_above(x: f64) -> i32 {
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    debug_assert!(biased != 0 && biased != 0x7ff);
    biased - 1022
}

/// Spacing of binary64 numbers at `x`.
pub(crate) fn ulp(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 || !x.is_finite() {
        return 0.0;
    }
    let next = f64::from_bits(x.to_bits() + 1);
    if next.is_finite() {
        next - x
    } else {
        x - f64::from_bits(x.to_bits() - 1)
    }
}

impl<const K: usize> Expansion<K> {
    const CHECK: () = assert!(K >= 2 && K <= MAX_COMPONENTS, "component count must be in 2..=8");

    pub const ZERO: Self = Self([0.0; K]);
    pub const ONE: Self = {
        let mut c = [0.0; K];
        c[0] = 1.0;
        Self(c)
    };

    /// Unit round-off, `2^(1 - 53K)`.
    pub const EPS: f64 = {
        let bits = 53 * K as i32 - 1;
        f64::from_bits(((1023 - bits) as u64) << 52)
    };

    /// Significand bits carried, `53K`.
    pub const BITS: u32 = 53 * K as u32;

    #[inline(always)]
    pub const fn from_f64(x: f64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::CHECK;
        let mut c = [0.0; K];
        c[0] = x;
        Self(c)
    }

    /// Wraps components that already satisfy the nonoverlapping invariant.
    #[inline(always)]
    pub const fn from_components_unchecked(c: [f64; K]) -> Self {
        Self(c)
    }

    /// Builds an expansion from an arbitrary list of binary64 terms, whose
    /// exact sum is the intended value.
    pub fn renormalize(raw: &[f64]) -> Self {
        let mut buf: Vec<f64> = raw.to_vec();
        Self(renormalize_unordered(&mut buf))
    }

    /// Renormalizes terms that are already in decreasing magnitude order.
    #[inline]
    pub(crate) fn renormalize_ordered(mut c: [f64; K]) -> Self {
        Self(renormalize_in_place(&mut c))
    }

    #[inline(always)]
    pub const fn components(&self) -> &[f64; K] {
        &self.0
    }

    #[inline(always)]
    pub const fn leading(&self) -> f64 {
        self.0[0]
    }

    pub fn to_f64(&self) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc + c)
    }

    #[inline(always)]
    pub fn is_zero(&self) -> bool {
        self.0[0] == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    #[inline(always)]
    pub fn abs(self) -> Self {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    /// Exact scaling by `2^e` (no overflow/underflow checks).
    #[inline]
    pub fn mul_pow2(self, e: i32) -> Self {
        let mut c = self.0;
        if (-1022..=1023).contains(&e) {
            let s = pow2(e);
            c.iter_mut().for_each(|x| *x *= s);
        } else {
            let half = e / 2;
            let (s1, s2) = (pow2(half), pow2(e - half));
            c.iter_mut().for_each(|x| *x = *x * s1 * s2);
        }
        Self(c)
    }

    /// Converts to a different component count, rounding when narrowing.
    pub fn convert<const J: usize>(self) -> Expansion<J> {
        if J >= K {
            let mut c = [0.0; J];
            c[..K].copy_from_slice(&self.0);
            Expansion(c)
        } else {
            let mut buf = self.0;
            Expansion(renormalize_in_place(&mut buf))
        }
    }

    /// Checks the nonoverlapping invariant: every nonzero component is at
    /// most half an ulp of its predecessor, no zero precedes a nonzero
    /// component, and nothing is NaN.
    pub fn is_normalized(&self) -> bool {
        if self.0.iter().any(|c| c.is_nan()) {
            return false;
        }
        self.0.windows(2).all(|w| {
            if w[0] == 0.0 {
                w[1] == 0.0
            } else {
                w[1].abs() <= ulp(w[0]) / 2.0
            }
        })
    }

    #[inline(always)]
    pub fn add_f64(self, b: f64) -> Self {
        if K == 2 {
            let (sh, sl) = two_sum(self.0[0], b);
            let v = self.0[1] + sl;
            let (h, l) = fast_two_sum(sh, v);
            return Self::pair(h, l);
        }
        let mut buf = [0.0; MAX_COMPONENTS + 1];
        let n = merge_by_magnitude(&self.0, &[b], &mut buf);
        Self(renormalize_in_place(&mut buf[..n]))
    }

    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Self {
        if K == 2 {
            let (ch, cl1) = two_prod(self.0[0], b);
            let cl3 = fmadd(self.0[1], b, cl1);
            let (h, l) = fast_two_sum(ch, cl3);
            return Self::pair(h, l);
        }
        let mut hi = [0.0; MAX_COMPONENTS];
        let mut lo = [0.0; MAX_COMPONENTS];
        for i in 0..K {
            (hi[i], lo[i]) = two_prod(self.0[i], b);
        }
        let mut buf = [0.0; 2 * MAX_COMPONENTS];
        let n = merge_by_magnitude(&hi[..K], &lo[..K], &mut buf);
        Self(renormalize_in_place(&mut buf[..n]))
    }

    /// `self / y`, by long division with `K + 1` quotient terms.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, y: Self) -> Result<Self> {
        if y.0[0] == 0.0 {
            return Err(Error::SingularScalarDivide);
        }
        let mut q = [0.0; MAX_COMPONENTS + 1];
        let mut r = self;
        for qi in q.iter_mut().take(K + 1) {
            *qi = r.0[0] / y.0[0];
            r -= y.mul_f64(*qi);
        }
        Ok(Self(renormalize_in_place(&mut q[..K + 1])))
    }

    pub fn recip(self) -> Result<Self> {
        Self::ONE.div(self)
    }

    /// Square root by Newton iteration from the binary64 estimate. Only
    /// used for complex moduli in error metrics.
    pub(crate) fn sqrt(self) -> Self {
        if self.0[0] <= 0.0 {
            return Self::ZERO;
        }
        let mut y = Self::from_f64(self.0[0].sqrt());
        // 53 bits doubles per step.
        let mut bits = 53;
        while bits < Self::BITS + 2 {
            let y2 = y * y;
            let corr = (self - y2).div(y.mul_f64(2.0)).unwrap_or(Self::ZERO);
            y += corr;
            bits *= 2;
        }
        y
    }

    #[inline(always)]
    fn pair(h: f64, l: f64) -> Self {
        let mut c = [0.0; K];
        c[0] = h;
        c[1] = l;
        Self(c)
    }

    #[inline(always)]
    fn add_impl(self, y: Self) -> Self {
        if K == 2 {
            // Accurate double-double addition.
            let (s, e) = two_sum(self.0[0], y.0[0]);
            let (t, f) = two_sum(self.0[1], y.0[1]);
            let e = e + t;
            let (s, e) = fast_two_sum(s, e);
            let e = e + f;
            let (h, l) = fast_two_sum(s, e);
            return Self::pair(h, l);
        }
        let mut buf = [0.0; 2 * MAX_COMPONENTS];
        let n = merge_by_magnitude(&self.0, &y.0, &mut buf);
        Self(renormalize_in_place(&mut buf[..n]))
    }

    #[inline(always)]
    fn mul_impl(self, y: Self) -> Self {
        if K == 2 {
            // The cross terms are fused in a fixed order, so pick a
            // canonical operand order to keep the product commutative.
            let swap = term_before((y.0[0], y.0[1]), (self.0[0], self.0[1]));
            let (x, y) = if swap { (&y.0, &self.0) } else { (&self.0, &y.0) };
            let (ch, cl1) = two_prod(x[0], y[0]);
            let tl0 = x[1] * y[1];
            let tl1 = fmadd(x[0], y[1], tl0);
            let cl2 = fmadd(x[1], y[0], tl1);
            let cl3 = cl1 + cl2;
            let (h, l) = fast_two_sum(ch, cl3);
            return Self::pair(h, l);
        }
        let (x, y) = (&self.0, &y.0);
        // Partial products grouped by significance level i + j. Levels
        // below K are formed exactly; everything at level K, including the
        // rounding errors of level K - 1, is summed into one binary64 term;
        // higher levels are dropped. Gaps between components can break the
        // level order, which renormalization tolerates.
        let mut buf = [0.0; SCRATCH];
        let mut errs = [0.0; MAX_COMPONENTS];
        let mut n = 0;
        let mut n_err = 0;
        for level in 0..K {
            let mut next_errs = [0.0; MAX_COMPONENTS];
            let mut n_next = 0;
            for i in level.saturating_sub(K - 1)..=level / 2 {
                let j = level - i;
                let a = two_prod(x[i], y[j]);
                if i == j {
                    buf[n] = a.0;
                    n += 1;
                    next_errs[n_next] = a.1;
                    n_next += 1;
                } else {
                    // Mirrored pairs go in a canonical order so that x * y
                    // and y * x see identical term lists.
                    let b = two_prod(x[j], y[i]);
                    let (a, b) = if term_before(a, b) { (a, b) } else { (b, a) };
                    buf[n] = a.0;
                    buf[n + 1] = b.0;
                    n += 2;
                    next_errs[n_next] = a.1;
                    next_errs[n_next + 1] = b.1;
                    n_next += 2;
                }
            }
            buf[n..n + n_err].copy_from_slice(&errs[..n_err]);
            n += n_err;
            errs = next_errs;
            n_err = n_next;
        }
        let mut last = [0.0; 2 * MAX_COMPONENTS];
        let mut n_last = 0;
        for i in 1..=K / 2 {
            let (a, b) = (x[i] * y[K - i], x[K - i] * y[i]);
            let (a, b) = if i == K - i { (a, 0.0) } else if key_before(a, b) { (a, b) } else { (b, a) };
            last[n_last] = a;
            last[n_last + 1] = b;
            n_last += 2;
        }
        last[n_last..n_last + n_err].copy_from_slice(&errs[..n_err]);
        n_last += n_err;
        buf[n] = last[..n_last].iter().sum();
        n += 1;
        Self(renormalize_in_place(&mut buf[..n]))
    }
}

/// Total order: larger magnitude first, then by value.
#[inline(always)]
fn key_before(a: f64, b: f64) -> bool {
    let (ma, mb) = (a.abs(), b.abs());
    ma > mb || (ma == mb && a.total_cmp(&b).is_ge())
}

#[inline(always)]
fn term_before(a: (f64, f64), b: (f64, f64)) -> bool {
    if a.0 != b.0 {
        key_before(a.0, b.0)
    } else {
        key_before(a.1, b.1)
    }
}

/// Merges two magnitude-descending lists into `out`, returning the length.
/// Ties are broken by value, so the result does not depend on argument order.
#[inline(always)]
fn merge_by_magnitude(a: &[f64], b: &[f64], out: &mut [f64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        if key_before(a[i], b[j]) {
            out[n] = a[i];
            i += 1;
        } else {
            out[n] = b[j];
            j += 1;
        }
        n += 1;
    }
    for &x in a[i..].iter().chain(&b[j..]) {
        out[n] = x;
        n += 1;
    }
    n
}

impl<const K: usize> Default for Expansion<K> {
    fn default() -> Self {
        Self::ZERO
    }
}

impl<const K: usize> From<f64> for Expansion<K> {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl<const K: usize> Neg for Expansion<K> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        let mut c = self.0;
        c.iter_mut().for_each(|x| *x = -*x);
        Self(c)
    }
}

impl<const K: usize> Add for Expansion<K> {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        self.add_impl(rhs)
    }
}

impl<const K: usize> Sub for Expansion<K> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        self.add_impl(-rhs)
    }
}

impl<const K: usize> Mul for Expansion<K> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(rhs)
    }
}

impl<const K: usize> AddAssign for Expansion<K> {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const K: usize> SubAssign for Expansion<K> {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const K: usize> PartialOrd for Expansion<K> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (*self - *other).leading().partial_cmp(&0.0)
    }
}

impl<const K: usize> fmt::Debug for Expansion<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expansion{:?}", self.0)
    }
}

impl<const K: usize> fmt::Display for Expansion<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(Self::decimal_digits());
        f.write_str(&self.to_decimal(digits))
    }
}

impl<const K: usize> std::str::FromStr for Expansion<K> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse_decimal(s)
    }
}
