//! Row-major working storage for the kernels: one `Expansion` per entry.
//! Converted to and from the planar [`RealMatrix`] at the API boundary.

use crate::expansion::Expansion;
use crate::matrix::RealMatrix;
use crate::parallel;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Dense<const K: usize> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Expansion<K>>,
}

impl<const K: usize> Dense<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Expansion::ZERO; rows * cols] }
    }

    pub fn from_matrix(m: &RealMatrix<K>) -> Self {
        Self { rows: m.rows(), cols: m.cols(), data: m.to_entries() }
    }

    pub fn into_matrix(self) -> RealMatrix<K> {
        RealMatrix::from_entries(self.rows, self.cols, &self.data)
    }

    #[inline(always)]
    pub fn at(&self, i: usize, j: usize) -> Expansion<K> {
        self.data[i * self.cols + j]
    }

    #[inline(always)]
    pub fn row(&self, i: usize) -> &[Expansion<K>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut data = Vec::with_capacity(nr * nc);
        for i in r0..r0 + nr {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + nc]);
        }
        Self { rows: nr, cols: nc, data }
    }

    pub fn put_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            let d = (r0 + i) * self.cols + c0;
            self.data[d..d + b.cols].copy_from_slice(b.row(i));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    fn zip(&self, o: &Self, f: impl Fn(Expansion<K>, Expansion<K>) -> Expansion<K>) -> Self {
        debug_assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }
}

/// `C += A[rows, ks] * B[ks, :]` for one block of rows of `C`, where `c`
/// holds rows `r0..r0 + c.len() / B.cols` of the output. Each output
/// element accumulates in ascending `k`.
#[inline]
pub(crate) fn accumulate<const K: usize>(
    a: &Dense<K>,
    b: &Dense<K>,
    r0: usize,
    ks: std::ops::Range<usize>,
    js: std::ops::Range<usize>,
    c: &mut [Expansion<K>],
) {
    let l = b.cols;
    for (ii, crow) in c.chunks_exact_mut(l).enumerate() {
        let arow = a.row(r0 + ii);
        for k in ks.clone() {
            let aik = arow[k];
            let brow = &b.row(k)[js.clone()];
            for (cj, &bkj) in crow[js.clone()].iter_mut().zip(brow) {
                *cj += aik * bkj;
            }
        }
    }
}

/// Blocked product. Loop tiling only changes traversal, not the order in
/// which each output element accumulates, so every block size gives the
/// same bits.
pub(crate) fn gemm_blocked<const K: usize>(a: &Dense<K>, b: &Dense<K>, block: usize, threads: usize) -> Dense<K> {
    let (m, n, l) = (a.rows, a.cols, b.cols);
    let mut c = Dense::zeros(m, l);
    if l == 0 {
        return c;
    }
    let block = block.max(1);
    parallel::for_each_chunk(threads, &mut c.data, block * l, |bi, cblock| {
        let r0 = bi * block;
        for k0 in (0..n).step_by(block) {
            let ks = k0..(k0 + block).min(n);
            for j0 in (0..l).step_by(block) {
                accumulate(a, b, r0, ks.clone(), j0..(j0 + block).min(l), cblock);
            }
        }
    });
    c
}
