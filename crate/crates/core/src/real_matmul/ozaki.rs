//! Ozaki scheme: split each operand into a short stack of binary64 matrices
//! whose entries carry at most `beta` significant bits relative to their
//! row (left operand) or column (right operand), so that every binary64
//! product of two slices is exact; then accumulate the slice products in
//! extended precision.

use super::f64_gemm::F64Gemm;
use crate::error::{Error, Result};
use crate::expansion::{exponent_above, pow2, Expansion};
use crate::matrix::RealMatrix;
use crate::parallel;

/// Which index shares an exponent within one slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitAxis {
    /// Left operand: one exponent per row.
    Rows,
    /// Right operand: one exponent per column.
    Cols,
}

/// A matrix written as the sum of `d` binary64 slices.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitStack {
    pub d: usize,
    /// Significant bits per slice entry.
    pub beta: u32,
    pub rows: usize,
    pub cols: usize,
    pub axis: SplitAxis,
    /// Row-major slices, most significant first, already scaled.
    pub parts: Vec<Vec<f64>>,
    /// Per-row (or per-column) exponent `e` with `|entry| < 2^e`. Slice
    /// `p` is an integer multiple of `2^(e - beta (p + 1))`.
    pub exps: Vec<i32>,
}

impl SplitStack {
    /// Unit of slice `p` along row/column `idx`.
    pub fn unit(&self, p: usize, idx: usize) -> f64 {
        pow2(self.exps[idx] - self.beta as i32 * (p as i32 + 1))
    }

    /// Sum of all slices, most significant first.
    pub fn reconstruct<const K: usize>(&self) -> RealMatrix<K> {
        let mut acc = vec![Expansion::<K>::ZERO; self.rows * self.cols];
        for part in &self.parts {
            for (c, &v) in acc.iter_mut().zip(part) {
                *c = c.add_f64(v);
            }
        }
        RealMatrix::from_entries(self.rows, self.cols, &acc)
    }
}

/// Bits per slice that keep length-`n` binary64 dot products exact:
/// `floor((53 - ceil(log2 n)) / 2)`.
pub fn split_beta(n: usize) -> Result<u32> {
    let log = if n <= 1 { 0 } else { usize::BITS - (n - 1).leading_zeros() };
    if log >= 51 {
        return Err(Error::SplitBudgetExceeded { n });
    }
    Ok((53 - log) / 2)
}

/// Row-wise split of a left operand.
pub fn ozaki_split<const K: usize>(a: &RealMatrix<K>, d: usize) -> Result<SplitStack> {
    split(a, d, SplitAxis::Rows)
}

/// Column-wise split of a right operand.
pub fn ozaki_split_cols<const K: usize>(b: &RealMatrix<K>, d: usize) -> Result<SplitStack> {
    split(b, d, SplitAxis::Cols)
}

/// Slices whose unit falls below this exponent are left zero.
const MIN_UNIT_EXP: i32 = -1000;

fn split<const K: usize>(m: &RealMatrix<K>, d: usize, axis: SplitAxis) -> Result<SplitStack> {
    if d == 0 {
        return Err(Error::InvalidParameter("split count must be at least 1".into()));
    }
    let (rows, cols) = m.shape();
    let inner = match axis {
        SplitAxis::Rows => cols,
        SplitAxis::Cols => rows,
    };
    let beta = split_beta(inner)?;
    let lead = m.plane(0);
    let groups = match axis {
        SplitAxis::Rows => rows,
        SplitAxis::Cols => cols,
    };
    let group_of = |idx: usize| match axis {
        SplitAxis::Rows => idx / cols.max(1),
        SplitAxis::Cols => idx % cols.max(1),
    };
    let mut maxes = vec![0.0f64; groups];
    for (idx, &x) in lead.iter().enumerate() {
        let g = group_of(idx);
        maxes[g] = maxes[g].max(x.abs());
    }
    let exps: Vec<i32> = maxes
        .iter()
        .map(|&x| if x == 0.0 { MIN_UNIT_EXP } else { exponent_above(x) })
        .collect();

    let mut rest = m.to_entries();
    let mut parts = Vec::with_capacity(d);
    for p in 0..d {
        let mut part = vec![0.0; rows * cols];
        for (idx, (r, out)) in rest.iter_mut().zip(part.iter_mut()).enumerate() {
            let ue = exps[group_of(idx)] - beta as i32 * (p as i32 + 1);
            if ue < MIN_UNIT_EXP || r.is_zero() {
                continue;
            }
            let v = (r.leading() * pow2(-ue)).round_ties_even() * pow2(ue);
            if v != 0.0 {
                let mut c = *r.components();
                // Exact: `v` is the leading component rounded to a multiple of
                // a unit no finer than its ulp.
                c[0] -= v;
                *r = Expansion::renormalize_ordered(c);
                *out = v;
            }
        }
        parts.push(part);
    }
    Ok(SplitStack { d, beta, rows, cols, axis, parts, exps })
}

/// Slice pairs `(p, q)` multiplied by [`rgemm_ozaki`], in accumulation
/// order: `p + q < d`, ascending `p + q` then `p`, skipping levels that
/// sit entirely below the working precision.
pub fn ozaki_schedule(d: usize, beta: u32, inner: usize, bits: u32) -> Vec<(usize, usize)> {
    let log = if inner <= 1 { 0 } else { usize::BITS - (inner - 1).leading_zeros() };
    let mut pairs = Vec::new();
    for s in 0..d {
        if beta * s as u32 > bits + log {
            break;
        }
        for p in 0..=s {
            pairs.push((p, s - p));
        }
    }
    pairs
}

pub(crate) fn gemm_ozaki<const K: usize>(
    a: &RealMatrix<K>,
    b: &RealMatrix<K>,
    d: usize,
    threads: usize,
    f64_gemm: &dyn F64Gemm,
) -> Result<RealMatrix<K>> {
    let (m, n, l) = (a.rows(), a.cols(), b.cols());
    let sa = ozaki_split(a, d)?;
    let sb = ozaki_split_cols(b, d)?;
    let mut acc = vec![Expansion::<K>::ZERO; m * l];
    let mut prod = vec![0.0; m * l];
    for (p, q) in ozaki_schedule(d, sa.beta, n, Expansion::<K>::BITS) {
        f64_gemm.gemm(m, n, l, &sa.parts[p], &sb.parts[q], &mut prod, threads);
        parallel::for_each_chunk(threads, &mut acc, 4096, |ci, chunk| {
            let base = ci * 4096;
            for (c, &v) in chunk.iter_mut().zip(&prod[base..]) {
                *c = c.add_f64(v);
            }
        });
    }
    Ok(RealMatrix::from_entries(m, l, &acc))
}
