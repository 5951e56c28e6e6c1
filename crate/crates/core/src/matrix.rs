//! Dense matrices in planar layout.
//!
//! A [`RealMatrix<K>`] is row-major, but the `K` components of its entries
//! live in `K` separate planes: plane `c` holds component `c` of every
//! entry, contiguously. A [`PlanarComplexMatrix<K>`] pairs a real and an
//! imaginary plane set of identical shape.

use crate::complex::ComplexScalar;
use crate::error::{Error, Result};
use crate::expansion::Expansion;

#[derive(Clone, PartialEq)]
pub struct RealMatrix<const K: usize> {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl<const K: usize> std::fmt::Debug for RealMatrix<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RealMatrix<{K}>({}x{})", self.rows, self.cols)
    }
}

impl<const K: usize> RealMatrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; K * rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Expansion<K>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Row-major binary64 values, lower components zero.
    pub fn from_f64(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        m.data[..rows * cols].copy_from_slice(values);
        Ok(m)
    }

    #[inline(always)]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline(always)]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline(always)]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline(always)]
    fn plane_len(&self) -> usize {
        self.rows * self.cols
    }

    /// Component `c` of every entry, row-major.
    pub fn plane(&self, c: usize) -> &[f64] {
        let len = self.plane_len();
        &self.data[c * len..(c + 1) * len]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let len = self.plane_len();
        &mut self.data[c * len..(c + 1) * len]
    }

    #[inline(always)]
    pub(crate) fn load(&self, idx: usize) -> Expansion<K> {
        let len = self.plane_len();
        Expansion::from_components_unchecked(std::array::from_fn(|c| self.data[c * len + idx]))
    }

    #[inline(always)]
    pub(crate) fn store(&mut self, idx: usize, x: Expansion<K>) {
        let len = self.plane_len();
        for (c, &v) in x.components().iter().enumerate() {
            self.data[c * len + idx] = v;
        }
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> Expansion<K> {
        debug_assert!(i < self.rows && j < self.cols);
        self.load(i * self.cols + j)
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, x: Expansion<K>) {
        debug_assert!(i < self.rows && j < self.cols);
        self.store(i * self.cols + j, x)
    }

    pub fn convert<const J: usize>(&self) -> RealMatrix<J> {
        let mut out = RealMatrix::<J>::zeros(self.rows, self.cols);
        for idx in 0..self.plane_len() {
            out.store(idx, self.load(idx).convert());
        }
        out
    }

    /// Entries in row-major order, one `Expansion` per entry.
    pub(crate) fn to_entries(&self) -> Vec<Expansion<K>> {
        (0..self.plane_len()).map(|idx| self.load(idx)).collect()
    }

    pub(crate) fn from_entries(rows: usize, cols: usize, entries: &[Expansion<K>]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for (idx, &x) in entries.iter().enumerate() {
            m.store(idx, x);
        }
        m
    }

    /// Copy of the `nr x nc` block at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        let mut out = Self::zeros(nr, nc);
        for c in 0..K {
            let src = self.plane(c);
            let dst = out.plane_mut(c);
            for i in 0..nr {
                let s = (r0 + i) * self.cols + c0;
                dst[i * nc..(i + 1) * nc].copy_from_slice(&src[s..s + nc]);
            }
        }
        out
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        let cols = self.cols;
        for c in 0..K {
            let src = block.plane(c);
            let dst = self.plane_mut(c);
            for i in 0..block.rows {
                let d = (r0 + i) * cols + c0;
                dst[d..d + block.cols].copy_from_slice(&src[i * block.cols..(i + 1) * block.cols]);
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols = self.cols;
        for c in 0..K {
            let p = self.plane_mut(c);
            for j in 0..cols {
                p.swap(a * cols + j, b * cols + j);
            }
        }
    }

    /// Largest `|leading component|`.
    pub fn max_abs(&self) -> f64 {
        self.plane(0).iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn iter(&self) -> impl Iterator<Item = Expansion<K>> + '_ {
        (0..self.plane_len()).map(move |idx| self.load(idx))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Expansion<K>, Expansion<K>) -> Expansion<K>) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = Self::zeros(self.rows, self.cols);
        for idx in 0..self.plane_len() {
            out.store(idx, f(self.load(idx), other.load(idx)));
        }
        Ok(out)
    }

    /// Elementwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Elementwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

#[derive(Clone, PartialEq)]
pub struct PlanarComplexMatrix<const K: usize> {
    pub re: RealMatrix<K>,
    pub im: RealMatrix<K>,
}

impl<const K: usize> std::fmt::Debug for PlanarComplexMatrix<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlanarComplexMatrix<{K}>({}x{})", self.rows(), self.cols())
    }
}

impl<const K: usize> PlanarComplexMatrix<K> {
    pub fn from_planes(re: RealMatrix<K>, im: RealMatrix<K>) -> Result<Self> {
        re.check_same_shape(&im)?;
        Ok(Self { re, im })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { re: RealMatrix::zeros(rows, cols), im: RealMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        Self { re: RealMatrix::identity(n), im: RealMatrix::zeros(n, n) }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar<K>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline(always)]
    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    #[inline(always)]
    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    #[inline(always)]
    pub fn shape(&self) -> (usize, usize) {
        self.re.shape()
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> ComplexScalar<K> {
        ComplexScalar::new(self.re.get(i, j), self.im.get(i, j))
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, z: ComplexScalar<K>) {
        self.re.set(i, j, z.re);
        self.im.set(i, j, z.im);
    }

    pub fn convert<const J: usize>(&self) -> PlanarComplexMatrix<J> {
        PlanarComplexMatrix { re: self.re.convert(), im: self.im.convert() }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self { re: self.re.submatrix(r0, c0, nr, nc), im: self.im.submatrix(r0, c0, nr, nc) }
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Self) {
        self.re.set_submatrix(r0, c0, &block.re);
        self.im.set_submatrix(r0, c0, &block.im);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.re.swap_rows(a, b);
        self.im.swap_rows(a, b);
    }

    /// Largest `|re| + |im|` over the leading components.
    pub fn max_abs1(&self) -> f64 {
        self.re
            .plane(0)
            .iter()
            .zip(self.im.plane(0))
            .fold(0.0, |m, (r, i)| m.max(r.abs() + i.abs()))
    }

    /// Largest modulus over the leading components.
    pub fn max_modulus(&self) -> f64 {
        self.re.plane(0).iter().zip(self.im.plane(0)).fold(0.0, |m, (r, i)| m.max(r.hypot(*i)))
    }

    /// Entries in row-major order.
    pub(crate) fn to_entries(&self) -> Vec<ComplexScalar<K>> {
        self.re.iter().zip(self.im.iter()).map(|(r, i)| ComplexScalar::new(r, i)).collect()
    }

    pub(crate) fn from_entries(rows: usize, cols: usize, entries: &[ComplexScalar<K>]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Self::zeros(rows, cols);
        for (idx, z) in entries.iter().enumerate() {
            m.re.store(idx, z.re);
            m.im.store(idx, z.im);
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { re: self.re.sub(&other.re)?, im: self.im.sub(&other.im)? })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { re: self.re.add(&other.re)?, im: self.im.add(&other.im)? })
    }
}

/// Complex vector in planar form.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector<const K: usize> {
    pub re: Vec<Expansion<K>>,
    pub im: Vec<Expansion<K>>,
}

impl<const K: usize> ComplexVector<K> {
    pub fn zeros(n: usize) -> Self {
        Self { re: vec![Expansion::ZERO; n], im: vec![Expansion::ZERO; n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> ComplexScalar<K>) -> Self {
        let mut v = Self::zeros(n);
        for i in 0..n {
            v.set(i, f(i));
        }
        v
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    #[inline(always)]
    pub fn get(&self, i: usize) -> ComplexScalar<K> {
        ComplexScalar::new(self.re[i], self.im[i])
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, z: ComplexScalar<K>) {
        self.re[i] = z.re;
        self.im[i] = z.im;
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.re.swap(a, b);
        self.im.swap(a, b);
    }

    pub fn convert<const J: usize>(&self) -> ComplexVector<J> {
        ComplexVector {
            re: self.re.iter().map(|x| x.convert()).collect(),
            im: self.im.iter().map(|x| x.convert()).collect(),
        }
    }
}
