//! The binary64 matrix product underneath the Ozaki scheme.

use crate::parallel;

/// A plain binary64 GEMM, `C = A * B` with row-major `A: m x n`, `B: n x l`.
///
/// The Ozaki split guarantees every product and partial sum is exact, so
/// any implementation (including a vendor DGEMM) gives identical results.
pub trait F64Gemm: Sync {
    #[allow(clippy::too_many_arguments)]
    fn gemm(&self, m: usize, n: usize, l: usize, a: &[f64], b: &[f64], c: &mut [f64], threads: usize);
}

/// Cache-blocked triple loop, parallel over row blocks.
#[derive(Clone, Copy, Debug)]
pub struct PlainF64Gemm {
    pub block: usize,
}

impl Default for PlainF64Gemm {
    fn default() -> Self {
        Self { block: 64 }
    }
}

impl F64Gemm for PlainF64Gemm {
    fn gemm(&self, m: usize, n: usize, l: usize, a: &[f64], b: &[f64], c: &mut [f64], threads: usize) {
        assert!(a.len() == m * n && b.len() == n * l && c.len() == m * l);
        c.fill(0.0);
        if l == 0 {
            return;
        }
        let bs = self.block.max(1);
        parallel::for_each_chunk(threads, c, bs * l, |bi, cblock| {
            let r0 = bi * bs;
            for k0 in (0..n).step_by(bs) {
                let k1 = (k0 + bs).min(n);
                for (ii, crow) in cblock.chunks_exact_mut(l).enumerate() {
                    let arow = &a[(r0 + ii) * n..(r0 + ii + 1) * n];
                    for k in k0..k1 {
                        let aik = arow[k];
                        if aik == 0.0 {
                            continue;
                        }
                        for (cj, &bkj) in crow.iter_mut().zip(&b[k * l..(k + 1) * l]) {
                            *cj += aik * bkj;
                        }
                    }
                }
            }
        });
    }
}
