use super::dense::{gemm_blocked, Dense};
use crate::expansion::Expansion;
use crate::parallel;

/// Strassen recursion on arbitrary shapes. Odd dimensions are peeled: the
/// even leading part recurses and the leftover row, column or inner index is
/// handled with vector products.
pub(crate) fn strassen<const K: usize>(
    a: &Dense<K>,
    b: &Dense<K>,
    threshold: usize,
    block: usize,
    threads: usize,
) -> Dense<K> {
    let (m, n, l) = (a.rows, a.cols, b.cols);
    if m.min(n).min(l) <= threshold {
        return gemm_blocked(a, b, block, 1);
    }
    let (m2, n2, l2) = (m & !1, n & !1, l & !1);
    let (mh, nh, lh) = (m2 / 2, n2 / 2, l2 / 2);

    let a11 = a.block(0, 0, mh, nh);
    let a12 = a.block(0, nh, mh, nh);
    let a21 = a.block(mh, 0, mh, nh);
    let a22 = a.block(mh, nh, mh, nh);
    let b11 = b.block(0, 0, nh, lh);
    let b12 = b.block(0, lh, nh, lh);
    let b21 = b.block(nh, 0, nh, lh);
    let b22 = b.block(nh, lh, nh, lh);

    // Seven independent products; split the thread budget across them.
    let sub = (threads / 7).max(1);
    let rec = |x: &Dense<K>, y: &Dense<K>| strassen(x, y, threshold, block, sub);
    let ((m1, m2p), ((m3, m4), (m5, (m6, m7)))) = parallel::join(
        threads,
        || {
            parallel::join(
                threads,
                || rec(&a11.add(&a22), &b11.add(&b22)),
                || rec(&a21.add(&a22), &b11),
            )
        },
        || {
            parallel::join(
                threads,
                || parallel::join(threads, || rec(&a11, &b12.sub(&b22)), || rec(&a22, &b21.sub(&b11))),
                || {
                    parallel::join(
                        threads,
                        || rec(&a11.add(&a12), &b22),
                        || {
                            parallel::join(
                                threads,
                                || rec(&a21.sub(&a11), &b11.add(&b12)),
                                || rec(&a12.sub(&a22), &b21.add(&b22)),
                            )
                        },
                    )
                },
            )
        },
    );

    let c11 = m1.add(&m4).sub(&m5).add(&m7);
    let c12 = m3.add(&m5);
    let c21 = m2p.add(&m4);
    let c22 = m1.sub(&m2p).add(&m3).add(&m6);

    let mut c = Dense::zeros(m, l);
    c.put_block(0, 0, &c11);
    c.put_block(0, lh, &c12);
    c.put_block(mh, 0, &c21);
    c.put_block(mh, lh, &c22);

    if n2 < n {
        // Rank-1 update with the last inner index.
        let k = n - 1;
        for i in 0..m2 {
            let aik = a.at(i, k);
            for j in 0..l2 {
                let idx = i * l + j;
                c.data[idx] += aik * b.at(k, j);
            }
        }
    }
    if l2 < l {
        // Last column: full matrix-vector product.
        let j = l - 1;
        for i in 0..m {
            c.data[i * l + j] = dot(a.row(i), (0..n).map(|k| b.at(k, j)));
        }
    }
    if m2 < m {
        // Last row: full vector-matrix product for the even columns.
        let i = m - 1;
        for j in 0..l2 {
            c.data[i * l + j] = dot(a.row(i), (0..n).map(|k| b.at(k, j)));
        }
    }
    c
}

fn dot<const K: usize>(x: &[Expansion<K>], y: impl Iterator<Item = Expansion<K>>) -> Expansion<K> {
    x.iter().zip(y).fold(Expansion::ZERO, |s, (&a, b)| s + a * b)
}
