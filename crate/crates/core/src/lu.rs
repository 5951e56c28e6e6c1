//! Complex LU decomposition with partial pivoting.
//!
//! Both variants factor `P A = L U` with `L` unit lower triangular and `U`
//! upper triangular, packed into one matrix. Row interchanges are applied to
//! whole rows, so the packed factors satisfy the identity literally.
//!
//! * [`lu_normal`] eliminates one column at a time with rank-1 updates.
//! * [`lu_blocked`] factors panels of `K` columns, solves for the block row
//!   of `U`, and updates the trailing matrix with a complex matrix product.
//!
//! ```
//! use mpclu::bench::gen_problem;
//! use mpclu::complex_matmul::{KernelChoice, RealKernel};
//! use mpclu::lu::{lu_blocked, max_rel_err, solve};
//! use mpclu::Method;
//!
//! // QD system with random [0, 1) entries and known solution x_k = k + k i.
//! let p = gen_problem::<4>(48, 1);
//! let kc = KernelChoice::new(Method::ThreeM, RealKernel::Ozaki { splits: 12 });
//! let f = lu_blocked(&p.a, 16, &kc, 1)?;
//! let x = solve(&f, &p.b)?;
//! assert!(max_rel_err(&x, &p.x)?.to_f64() < 1e-58);
//! # Ok::<(), mpclu::Error>(())
//! ```

use crate::complex::{ComplexScalar, Method};
use crate::complex_matmul::{cgemm, KernelChoice};
use crate::error::{Error, Result};
use crate::expansion::Expansion;
use crate::matrix::{ComplexVector, PlanarComplexMatrix};
use crate::parallel;

#[derive(Clone, Debug, PartialEq)]
pub struct LuFactors<const K: usize> {
    /// `L` strictly below the diagonal (unit diagonal implied), `U` on and
    /// above it.
    pub packed: PlanarComplexMatrix<K>,
    /// Row `i` was interchanged with row `pivots[i] >= i` at step `i`.
    pub pivots: Vec<usize>,
    /// Multiplication method used for updates and substitutions.
    pub method: Method,
}

impl<const K: usize> LuFactors<K> {
    pub fn n(&self) -> usize {
        self.packed.rows()
    }

    /// Unit lower factor as a dense matrix.
    pub fn l(&self) -> PlanarComplexMatrix<K> {
        let n = self.n();
        PlanarComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.packed.get(i, j),
            std::cmp::Ordering::Equal => ComplexScalar::ONE,
            std::cmp::Ordering::Less => ComplexScalar::ZERO,
        })
    }

    /// Upper factor as a dense matrix.
    pub fn u(&self) -> PlanarComplexMatrix<K> {
        let n = self.n();
        PlanarComplexMatrix::from_fn(n, n, |i, j| if i <= j { self.packed.get(i, j) } else { ComplexScalar::ZERO })
    }

    /// Largest `|re| + |im|` in `U`.
    pub fn max_abs1_u(&self) -> f64 {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| self.packed.get(i, j).abs1_estimate())
            .fold(0.0, f64::max)
    }

    /// Applies the row interchanges to `v` in place.
    pub fn permute<T>(&self, v: &mut [T]) {
        for (i, &p) in self.pivots.iter().enumerate() {
            v.swap(i, p);
        }
    }
}

/// Row-major working copy.
struct Work<const K: usize> {
    n: usize,
    a: Vec<ComplexScalar<K>>,
}

impl<const K: usize> Work<K> {
    fn new(m: &PlanarComplexMatrix<K>) -> Self {
        Self { n: m.rows(), a: m.to_entries() }
    }

    #[inline(always)]
    fn at(&self, i: usize, j: usize) -> ComplexScalar<K> {
        self.a[i * self.n + j]
    }

    fn swap_rows(&mut self, i: usize, p: usize) {
        if i != p {
            let n = self.n;
            let (head, tail) = self.a.split_at_mut(p * n);
            head[i * n..(i + 1) * n].swap_with_slice(&mut tail[..n]);
        }
    }

    fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> PlanarComplexMatrix<K> {
        PlanarComplexMatrix::from_fn(nr, nc, |i, j| self.at(r0 + i, c0 + j))
    }

    fn into_factors(self, pivots: Vec<usize>, method: Method) -> LuFactors<K> {
        LuFactors { packed: PlanarComplexMatrix::from_entries(self.n, self.n, &self.a), pivots, method }
    }
}

fn check_square<const K: usize>(a: &PlanarComplexMatrix<K>) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!("LU needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    Ok(())
}

/// Factors columns `j0..j0 + width`. Rows are interchanged in full; the
/// rank-1 updates touch only columns `< j0 + width`.
fn factor_panel<const K: usize>(
    w: &mut Work<K>,
    j0: usize,
    width: usize,
    method: Method,
    threads: usize,
    pivots: &mut Vec<usize>,
) -> Result<()> {
    let n = w.n;
    let end = j0 + width;
    for j in j0..end {
        // Largest |re| + |im|, lowest row on ties.
        let mut p = j;
        let mut best = w.at(j, j).abs1_estimate();
        for i in j + 1..n {
            let v = w.at(i, j).abs1_estimate();
            if v > best {
                best = v;
                p = i;
            }
        }
        if w.at(p, j).is_zero() {
            return Err(Error::SingularMatrix { column: j });
        }
        w.swap_rows(j, p);
        pivots.push(p);

        let pivot = w.at(j, j);
        let urow: Vec<ComplexScalar<K>> = w.a[j * n + j + 1..j * n + end].to_vec();
        let below = &mut w.a[(j + 1) * n..];
        let err = std::sync::Mutex::new(None);
        parallel::for_each_chunk(threads, below, n, |_, row| {
            let l = match row[j].div(pivot) {
                Ok(l) => l,
                Err(e) => {
                    *err.lock().expect("error slot") = Some(e);
                    return;
                }
            };
            row[j] = l;
            for (x, &u) in row[j + 1..end].iter_mut().zip(&urow) {
                *x = *x - l.mul(u, method);
            }
        });
        if let Some(e) = err.into_inner().expect("error slot") {
            return Err(e);
        }
    }
    Ok(())
}

/// Right-looking elimination with 3M updates.
pub fn lu_normal<const K: usize>(a: &PlanarComplexMatrix<K>, threads: usize) -> Result<LuFactors<K>> {
    lu_normal_with(a, Method::ThreeM, threads)
}

/// Right-looking elimination with the given multiplication method.
pub fn lu_normal_with<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    method: Method,
    threads: usize,
) -> Result<LuFactors<K>> {
    check_square(a)?;
    let mut w = Work::new(a);
    let mut pivots = Vec::with_capacity(w.n);
    let n = w.n;
    parallel::install(threads, || factor_panel(&mut w, 0, n, method, threads, &mut pivots))?;
    Ok(w.into_factors(pivots, method))
}

/// Blocked factorization with panel width `block`. The panel updates use
/// `kc.method`; the trailing update is `A22 -= L21 U12` through
/// [`cgemm`] with `kc`, run on `threads`.
pub fn lu_blocked<const K: usize>(
    a: &PlanarComplexMatrix<K>,
    block: usize,
    kc: &KernelChoice,
    threads: usize,
) -> Result<LuFactors<K>> {
    check_square(a)?;
    let n = a.rows();
    if block == 0 || block > n.max(1) {
        return Err(Error::InvalidParameter(format!("block size {block} outside [1, {n}]")));
    }
    let kc = kc.with_threads(threads);
    kc.validate_for(block)?;
    let method = kc.method;
    let mut w = Work::new(a);
    let mut pivots = Vec::with_capacity(n);
    parallel::install(threads, || -> Result<()> {
        for j0 in (0..n).step_by(block) {
            let kb = block.min(n - j0);
            factor_panel(&mut w, j0, kb, method, threads, &mut pivots)?;
            let rest = n - j0 - kb;
            if rest == 0 {
                continue;
            }
            let l11 = w.block(j0, j0, kb, kb);
            let a12 = w.block(j0, j0 + kb, kb, rest);
            let u12 = trsm_unit_lower_with(&l11, &a12, method)?;
            for i in 0..kb {
                for j in 0..rest {
                    w.a[(j0 + i) * n + j0 + kb + j] = u12.get(i, j);
                }
            }
            let below = n - j0 - kb;
            let l21 = w.block(j0 + kb, j0, below, kb);
            let prod = cgemm(&l21, &u12, &kc)?;
            for i in 0..below {
                for j in 0..rest {
                    let idx = (j0 + kb + i) * n + j0 + kb + j;
                    w.a[idx] = w.a[idx] - prod.get(i, j);
                }
            }
        }
        Ok(())
    })?;
    Ok(w.into_factors(pivots, method))
}

/// Solves `L11 X = A12` for unit lower triangular `L11` by forward
/// substitution, using 3M products.
pub fn trsm_unit_lower<const K: usize>(
    l11: &PlanarComplexMatrix<K>,
    a12: &PlanarComplexMatrix<K>,
) -> Result<PlanarComplexMatrix<K>> {
    trsm_unit_lower_with(l11, a12, Method::ThreeM)
}

pub fn trsm_unit_lower_with<const K: usize>(
    l11: &PlanarComplexMatrix<K>,
    a12: &PlanarComplexMatrix<K>,
    method: Method,
) -> Result<PlanarComplexMatrix<K>> {
    let kb = l11.rows();
    if l11.cols() != kb || a12.rows() != kb {
        return Err(Error::DimensionMismatch(format!(
            "triangular solve with {}x{} and {}x{}",
            kb,
            l11.cols(),
            a12.rows(),
            a12.cols()
        )));
    }
    let m = a12.cols();
    let mut x = a12.to_entries();
    for i in 1..kb {
        let (done, rest) = x.split_at_mut(i * m);
        let row = &mut rest[..m];
        for k in 0..i {
            let l = l11.get(i, k);
            for (xi, &xk) in row.iter_mut().zip(&done[k * m..(k + 1) * m]) {
                *xi = *xi - l.mul(xk, method);
            }
        }
    }
    Ok(PlanarComplexMatrix::from_entries(kb, m, &x))
}

/// Solves `A x = b` from the factors of `A`.
pub fn solve<const K: usize>(f: &LuFactors<K>, b: &ComplexVector<K>) -> Result<ComplexVector<K>> {
    let n = f.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!("right-hand side of length {} for n = {n}", b.len())));
    }
    let method = f.method;
    let mut x: Vec<ComplexScalar<K>> = (0..n).map(|i| b.get(i)).collect();
    f.permute(&mut x);
    for i in 0..n {
        let mut s = x[i];
        for (k, &xk) in x[..i].iter().enumerate() {
            s = s - f.packed.get(i, k).mul(xk, method);
        }
        x[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for (k, &xk) in x.iter().enumerate().skip(i + 1) {
            s = s - f.packed.get(i, k).mul(xk, method);
        }
        let d = f.packed.get(i, i);
        if d.is_zero() {
            return Err(Error::SingularMatrix { column: i });
        }
        x[i] = s.div(d)?;
    }
    Ok(ComplexVector::from_fn(n, |i| x[i]))
}

/// `max_k |xhat_k - x_k| / |x_k|` with complex moduli.
pub fn max_rel_err<const K: usize>(xhat: &ComplexVector<K>, x: &ComplexVector<K>) -> Result<Expansion<K>> {
    if xhat.len() != x.len() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", xhat.len(), x.len())));
    }
    let mut worst = Expansion::ZERO;
    for k in 0..x.len() {
        let t = x.get(k);
        if t.is_zero() {
            return Err(Error::ZeroReference(k));
        }
        let e = (xhat.get(k) - t).modulus().div(t.modulus())?;
        if e > worst {
            worst = e;
        }
    }
    Ok(worst)
}

/// `max |(P A - L U)_ij|` over both planes, with the product formed at
/// precision `R` (choose `R > K`).
pub fn reconstruction_error<const K: usize, const R: usize>(a: &PlanarComplexMatrix<K>, f: &LuFactors<K>) -> f64 {
    let n = f.n();
    let mut rows: Vec<usize> = (0..n).collect();
    f.permute(&mut rows);
    let p = f.packed.convert::<R>();
    let mut worst = 0.0f64;
    for (i, &src) in rows.iter().enumerate() {
        for j in 0..n {
            let mut s = ComplexScalar::<R>::ZERO;
            for k in 0..=i.min(j) {
                let l = if k == i { ComplexScalar::ONE } else { p.get(i, k) };
                s = s + l.mul_4m(p.get(k, j));
            }
            let d = a.get(src, j).convert::<R>() - s;
            worst = worst.max(d.re.leading().abs()).max(d.im.leading().abs());
        }
    }
    worst
}
