//! Complex matrix products over the planar layout, by the 3M formula or the
//! 4M baseline, on top of any real kernel.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::Method;
use crate::error::{Error, Result};
use crate::matrix::{PlanarComplexMatrix, RealMatrix};
use crate::real_matmul::{
    mat_add, mat_sub, rgemm_blocked, rgemm_naive, rgemm_ozaki, rgemm_strassen, split_beta, DEFAULT_BLOCK,
    DEFAULT_STRASSEN_THRESHOLD,
};

/// Real kernel and its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kernel", rename_all = "lowercase")]
pub enum RealKernel {
    Naive,
    Blocked { block: usize },
    Strassen { threshold: usize, block: usize },
    Ozaki { splits: usize },
}

impl RealKernel {
    pub const fn blocked() -> Self {
        Self::Blocked { block: DEFAULT_BLOCK }
    }

    pub const fn strassen() -> Self {
        Self::Strassen { threshold: DEFAULT_STRASSEN_THRESHOLD, block: DEFAULT_BLOCK }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Naive => "naive",
            Self::Blocked { .. } => "blocked",
            Self::Strassen { .. } => "strassen",
            Self::Ozaki { .. } => "ozaki",
        }
    }

    pub fn splits(&self) -> Option<usize> {
        match *self {
            Self::Ozaki { splits } => Some(splits),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        match *self {
            Self::Naive => Ok(()),
            Self::Blocked { block: 0 } => bad("block size must be at least 1"),
            Self::Strassen { threshold, .. } if threshold < 2 => bad("Strassen threshold must be at least 2"),
            Self::Strassen { block: 0, .. } => bad("block size must be at least 1"),
            Self::Ozaki { splits: 0 } => bad("split count must be at least 1"),
            _ => Ok(()),
        }
    }

    /// Runs this kernel on one pair of real planes.
    pub fn gemm<const K: usize>(&self, a: &RealMatrix<K>, b: &RealMatrix<K>, threads: usize) -> Result<RealMatrix<K>> {
        match *self {
            Self::Naive => rgemm_naive(a, b),
            Self::Blocked { block } => rgemm_blocked(a, b, block, threads),
            Self::Strassen { threshold, block } => rgemm_strassen(a, b, threshold, block, threads),
            Self::Ozaki { splits } => rgemm_ozaki(a, b, splits, threads),
        }
    }
}

impl fmt::Display for RealKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a kernel name with default parameters.
impl FromStr for RealKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "naive" => Ok(Self::Naive),
            "blocked" => Ok(Self::blocked()),
            "strassen" => Ok(Self::strassen()),
            "ozaki" => Ok(Self::Ozaki { splits: 6 }),
            _ => Err(Error::InvalidParameter(format!("unknown kernel {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelChoice {
    pub method: Method,
    pub kernel: RealKernel,
    pub threads: usize,
}

impl KernelChoice {
    pub const fn new(method: Method, kernel: RealKernel) -> Self {
        Self { method, kernel, threads: 1 }
    }

    pub const fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        self.kernel.validate()
    }

    /// Also checks the split budget for an inner dimension `n`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if let RealKernel::Ozaki { .. } = self.kernel {
            split_beta(n)?;
        }
        Ok(())
    }

    fn real<const K: usize>(&self) -> impl Fn(&RealMatrix<K>, &RealMatrix<K>) -> Result<RealMatrix<K>> + '_ {
        move |a, b| self.kernel.gemm(a, b, self.threads)
    }
}

fn check_inner<const K: usize>(a: &PlanarComplexMatrix<K>, b: &PlanarComplexMatrix<K>) -> Result<()> {
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

/// 3M product with the real kernel given by `kc`.
pub fn cgemm_3m<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    b: &PlanarComplexMatrix<K>,
    kc: &KernelChoice,
) -> Result<PlanarComplexMatrix<K>> {
    kc.validate()?;
    cgemm_3m_with(a, b, kc.real())
}

/// 3M product over an arbitrary real product `mul`, called exactly three
/// times:
///
/// ```text
/// T1 = Re(A) Re(B)
/// T2 = Im(A) Im(B)
/// T3 = (Re(A) + Im(A)) (Re(B) + Im(B))
/// C  = (T1 - T2) + ((T3 - T1) - T2) i
/// ```
pub fn cgemm_3m_with<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    b: &PlanarComplexMatrix<K>,
    mul: impl Fn(&RealMatrix<K>, &RealMatrix<K>) -> Result<RealMatrix<K>>,
) -> Result<PlanarComplexMatrix<K>> {
    check_inner(a, b)?;
    let t1 = mul(&a.re, &b.re)?;
    let t2 = mul(&a.im, &b.im)?;
    let sa = mat_add(&a.re, &a.im)?;
    let sb = mat_add(&b.re, &b.im)?;
    let t3 = mul(&sa, &sb)?;
    let re = mat_sub(&t1, &t2)?;
    let im = mat_sub(&mat_sub(&t3, &t1)?, &t2)?;
    PlanarComplexMatrix::from_planes(re, im)
}

/// 4M product with the real kernel given by `kc`.
pub fn cgemm_4m<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    b: &PlanarComplexMatrix<K>,
    kc: &KernelChoice,
) -> Result<PlanarComplexMatrix<K>> {
    kc.validate()?;
    cgemm_4m_with(a, b, kc.real())
}

/// `C = (Re(A)Re(B) - Im(A)Im(B)) + (Im(A)Re(B) + Re(A)Im(B)) i`, four
/// calls to `mul`.
pub fn cgemm_4m_with<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    b: &PlanarComplexMatrix<K>,
    mul: impl Fn(&RealMatrix<K>, &RealMatrix<K>) -> Result<RealMatrix<K>>,
) -> Result<PlanarComplexMatrix<K>> {
    check_inner(a, b)?;
    let rr = mul(&a.re, &b.re)?;
    let ii = mul(&a.im, &b.im)?;
    let ir = mul(&a.im, &b.re)?;
    let ri = mul(&a.re, &b.im)?;
    PlanarComplexMatrix::from_planes(mat_sub(&rr, &ii)?, mat_add(&ir, &ri)?)
}

/// Dispatches on `kc.method`.
pub fn cgemm<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    b: &PlanarComplexMatrix<K>,
    kc: &KernelChoice,
) -> Result<PlanarComplexMatrix<K>> {
    match kc.method {
        Method::ThreeM => cgemm_3m(a, b, kc),
        Method::FourM => cgemm_4m(a, b, kc),
    }
}
