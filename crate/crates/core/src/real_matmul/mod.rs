//! Real extended-precision matrix products.
//!
//! All kernels accumulate each output element in a schedule fixed by their
//! parameters, so results do not depend on `threads`.

mod dense;
pub mod f64_gemm;
pub mod ozaki;
mod strassen;

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::parallel;
use dense::{accumulate, gemm_blocked, Dense};
pub use f64_gemm::{F64Gemm, PlainF64Gemm};
pub use ozaki::{ozaki_schedule, ozaki_split, ozaki_split_cols, split_beta, SplitAxis, SplitStack};

pub const DEFAULT_BLOCK: usize = 16;
pub const DEFAULT_STRASSEN_THRESHOLD: usize = 32;

fn check_inner<const K: usize>(a: &RealMatrix<K>, b: &RealMatrix<K>) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Triple loop; each `C[i][j]` accumulates in ascending `k`.
pub fn rgemm_naive<const K: usize>(a: &RealMatrix<K>, b: &RealMatrix<K>) -> Result<RealMatrix<K>> {
    check_inner(a, b)?;
    let (da, db) = (Dense::from_matrix(a), Dense::from_matrix(b));
    let mut c = Dense::zeros(a.rows(), b.cols());
    if b.cols() > 0 {
        accumulate(&da, &db, 0, 0..a.cols(), 0..b.cols(), &mut c.data);
    }
    Ok(c.into_matrix())
}

/// Tiled product, parallel over blocks of output rows. Bitwise equal to
/// [`rgemm_naive`] for every block size.
pub fn rgemm_blocked<const K: usize>(
    a: &RealMatrix<K>,
    b: &RealMatrix<K>,
    block: usize,
    threads: usize,
) -> Result<RealMatrix<K>> {
    check_inner(a, b)?;
    if block == 0 {
        return Err(Error::InvalidParameter("block size must be at least 1".into()));
    }
    let (da, db) = (Dense::from_matrix(a), Dense::from_matrix(b));
    Ok(parallel::install(threads, || gemm_blocked(&da, &db, block, threads)).into_matrix())
}

/// Strassen's seven-product recursion down to `threshold`, then
/// [`rgemm_blocked`] with `block`.
pub fn rgemm_strassen<const K: usize>(
    a: &RealMatrix<K>,
    b: &RealMatrix<K>,
    threshold: usize,
    block: usize,
    threads: usize,
) -> Result<RealMatrix<K>> {
    check_inner(a, b)?;
    if threshold < 2 {
        return Err(Error::InvalidParameter("Strassen threshold must be at least 2".into()));
    }
    if block == 0 {
        return Err(Error::InvalidParameter("block size must be at least 1".into()));
    }
    let (da, db) = (Dense::from_matrix(a), Dense::from_matrix(b));
    Ok(parallel::install(threads, || strassen::strassen(&da, &db, threshold, block, threads)).into_matrix())
}

/// Ozaki scheme with `d` slices per operand and the built-in binary64 GEMM.
pub fn rgemm_ozaki<const K: usize>(
    a: &RealMatrix<K>,
    b: &RealMatrix<K>,
    d: usize,
    threads: usize,
) -> Result<RealMatrix<K>> {
    rgemm_ozaki_with(a, b, d, threads, &PlainF64Gemm::default())
}

/// Ozaki scheme over a caller-supplied binary64 GEMM.
pub fn rgemm_ozaki_with<const K: usize>(
    a: &RealMatrix<K>,
    b: &RealMatrix<K>,
    d: usize,
    threads: usize,
    f64_gemm: &dyn F64Gemm,
) -> Result<RealMatrix<K>> {
    check_inner(a, b)?;
    parallel::install(threads, || ozaki::gemm_ozaki(a, b, d, threads, f64_gemm))
}

/// Elementwise sum.
pub fn mat_add<const K: usize>(a: &RealMatrix<K>, b: &RealMatrix<K>) -> Result<RealMatrix<K>> {
    a.add(b)
}

/// Elementwise difference.
pub fn mat_sub<const K: usize>(a: &RealMatrix<K>, b: &RealMatrix<K>) -> Result<RealMatrix<K>> {
    a.sub(b)
}
