mod common;

use common::*;
use mpclu::real_matmul::*;
use mpclu::{Expansion, RealMatrix};
use num_rational::BigRational;
use num_traits::Zero;

fn oracle<const K: usize>(a: &RealMatrix<K>, b: &RealMatrix<K>) -> RealMatrix<8> {
    rgemm_naive(&a.convert::<8>(), &b.convert::<8>()).unwrap()
}

#[test]
fn naive_dd_8x8_vs_reference() {
    let mut r = rng(11);
    let (a, b) = (random_matrix::<2>(&mut r, 8, 8), random_matrix::<2>(&mut r, 8, 8));
    let err = max_rel_dev(&rgemm_naive(&a, &b).unwrap(), &oracle(&a, &b));
    assert!(err <= 8.0 * 4.0 * Expansion::<2>::EPS, "{err:e}");
}

#[test]
fn naive_matches_exact_rational_dot_products() {
    let mut r = rng(12);
    let (a, b) = (random_matrix::<3>(&mut r, 5, 6), random_matrix::<3>(&mut r, 6, 4));
    let c = rgemm_naive(&a, &b).unwrap();
    for i in 0..5 {
        for j in 0..4 {
            let exact = (0..6).fold(BigRational::zero(), |s, k| s + exp_rat(&a.get(i, k)) * exp_rat(&b.get(k, j)));
            assert!(rel_err(&exp_rat(&c.get(i, j)), &exact) <= 6.0 * 4.0 * Expansion::<3>::EPS);
        }
    }
}

#[test]
fn blocked_td_64_equals_naive() {
    let mut r = rng(13);
    let (a, b) = (random_matrix::<3>(&mut r, 64, 64), random_matrix::<3>(&mut r, 64, 64));
    let naive = rgemm_naive(&a, &b).unwrap();
    assert_eq!(rgemm_blocked(&a, &b, 16, 1).unwrap(), naive);
    assert_eq!(rgemm_blocked(&a, &b, 64, 1).unwrap(), naive);
}

#[test]
fn strassen_dd_128_vs_naive() {
    let n = 128;
    let mut r = rng(14);
    let (a, b) = (random_matrix::<2>(&mut r, n, n), random_matrix::<2>(&mut r, n, n));
    let dev = max_rel_dev(&rgemm_strassen(&a, &b, 32, 16, 1).unwrap(), &rgemm_naive(&a, &b).unwrap());
    eprintln!("strassen DD n=128: max rel deviation {:.2} n eps", dev / (n as f64 * Expansion::<2>::EPS));
    assert!(dev <= 32.0 * n as f64 * Expansion::<2>::EPS, "{dev:e}");
    assert!(dev > 0.0, "Strassen should combine differently from the naive loop");
}

#[test]
fn strassen_identity_within_tolerance() {
    let n = 70;
    let mut r = rng(15);
    let a = random_matrix::<2>(&mut r, n, n);
    let c = rgemm_strassen(&RealMatrix::identity(n), &a, 8, 4, 1).unwrap();
    assert!(max_abs_dev(&c, &a) <= 32.0 * n as f64 * Expansion::<2>::EPS);
}

#[test]
fn split_reconstruction_dd() {
    let mut r = rng(16);
    let a = random_matrix::<2>(&mut r, 32, 32);
    let s = ozaki_split(&a, 6).unwrap();
    assert_eq!(s.parts.len(), 6);
    let back = s.reconstruct::<2>();
    for i in 0..32 {
        let rowmax = (0..32).map(|j| a.get(i, j).leading().abs()).fold(0.0, f64::max);
        for j in 0..32 {
            let d = (back.get(i, j) - a.get(i, j)).leading().abs();
            assert!(d <= Expansion::<2>::EPS * rowmax, "{i},{j}: {d:e}");
        }
    }
}

#[test]
fn split_parts_have_bounded_width() {
    let mut r = rng(17);
    let a = random_matrix::<4>(&mut r, 16, 24);
    for (s, axis_len) in [(ozaki_split(&a, 10).unwrap(), 24), (ozaki_split_cols(&a, 10).unwrap(), 24)] {
        for (p, part) in s.parts.iter().enumerate() {
            for (idx, &v) in part.iter().enumerate() {
                let g = match s.axis {
                    SplitAxis::Rows => idx / axis_len,
                    SplitAxis::Cols => idx % axis_len,
                };
                let m = v / s.unit(p, g);
                assert_eq!(m, m.round(), "not a multiple of its unit");
                assert!(m.abs() <= 2f64.powi(s.beta as i32));
            }
        }
    }
}

/// Every binary64 slice product is exact: recompute with rationals.
#[test]
fn ozaki_partial_products_exact() {
    let n = 8;
    let mut r = rng(18);
    let (a, b) = (random_matrix::<4>(&mut r, n, n), random_matrix::<4>(&mut r, n, n));
    let (sa, sb) = (ozaki_split(&a, 8).unwrap(), ozaki_split_cols(&b, 8).unwrap());
    let mut out = vec![0.0; n * n];
    for p in 0..8 {
        for q in 0..8 {
            PlainF64Gemm::default().gemm(n, n, n, &sa.parts[p], &sb.parts[q], &mut out, 1);
            for i in 0..n {
                for j in 0..n {
                    let exact = (0..n).fold(BigRational::zero(), |s, k| {
                        s + rat(sa.parts[p][i * n + k]) * rat(sb.parts[q][k * n + j])
                    });
                    assert_eq!(rat(out[i * n + j]), exact, "p={p} q={q}");
                }
            }
        }
    }
}

#[test]
fn ozaki_small_integers_exact() {
    let a = RealMatrix::<2>::from_fn(6, 6, |i, j| Expansion::from_f64((i * 7 + j * 3) as f64 % 11.0 - 5.0));
    let b = RealMatrix::<2>::from_fn(6, 6, |i, j| Expansion::from_f64((i + 2 * j) as f64 % 5.0));
    assert_eq!(rgemm_ozaki(&a, &b, 2, 1).unwrap(), rgemm_naive(&a, &b).unwrap());
}

fn ozaki_errors<const K: usize>(n: usize, seed: u64, ds: &[usize]) -> Vec<f64> {
    let mut r = rng(seed);
    let (a, b) = (random_matrix::<K>(&mut r, n, n), random_matrix::<K>(&mut r, n, n));
    let reference = oracle(&a, &b);
    ds.iter()
        .map(|&d| max_rel_dev(&rgemm_ozaki(&a, &b, d, 1).unwrap(), &reference) / Expansion::<K>::EPS)
        .collect()
}

#[test]
fn ozaki_dd_128_split_counts() {
    let n = 128;
    let e = ozaki_errors::<2>(n, 19, &[3, 4, 5, 6]);
    eprintln!("ozaki DD n=128 err/eps for d=3..6: {e:.3?}");
    assert!(e[3] <= n as f64, "d=6: {}", e[3]);
    assert!(e[0] > e[3]);
}

#[test]
fn ozaki_qd_64_split_counts() {
    let e = ozaki_errors::<4>(64, 20, &[8, 9, 10, 11, 12]);
    eprintln!("ozaki QD n=64 err/eps for d=8..12: {e:.3?}");
    assert!(e[4] <= 64.0, "d=12: {}", e[4]);
    assert!(e[0] > e[4]);
}

#[test]
fn ozaki_error_non_increasing_in_d() {
    let e = ozaki_errors::<3>(32, 21, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    eprintln!("ozaki TD n=32 err/eps for d=1..9: {e:.3?}");
    for w in e.windows(2) {
        assert!(w[1] <= w[0], "{e:?}");
    }
}

#[test]
fn every_kernel_agrees_with_reference() {
    let mut r = rng(22);
    for n in [4, 16, 64, 128] {
        let (a, b) = (random_matrix::<2>(&mut r, n, n), random_matrix::<2>(&mut r, n, n));
        let reference = oracle(&a, &b);
        let tol = 32.0 * n as f64 * Expansion::<2>::EPS;
        for (name, c) in [
            ("naive", rgemm_naive(&a, &b).unwrap()),
            ("blocked", rgemm_blocked(&a, &b, 16, 1).unwrap()),
            ("strassen", rgemm_strassen(&a, &b, 8, 16, 1).unwrap()),
            ("ozaki", rgemm_ozaki(&a, &b, 6, 1).unwrap()),
        ] {
            let e = max_rel_dev(&c, &reference);
            assert!(e <= tol, "{name} n={n}: {e:e}");
        }
    }
}

#[test]
fn kernels_are_thread_invariant() {
    let mut r = rng(23);
    let n = 96;
    let (a, b) = (random_matrix::<3>(&mut r, n, n), random_matrix::<3>(&mut r, n, n));
    let base = [
        rgemm_blocked(&a, &b, 16, 1).unwrap(),
        rgemm_strassen(&a, &b, 16, 16, 1).unwrap(),
        rgemm_ozaki(&a, &b, 8, 1).unwrap(),
    ];
    for threads in [2, 8] {
        assert_eq!(rgemm_blocked(&a, &b, 16, threads).unwrap(), base[0]);
        assert_eq!(rgemm_strassen(&a, &b, 16, 16, threads).unwrap(), base[1]);
        assert_eq!(rgemm_ozaki(&a, &b, 8, threads).unwrap(), base[2]);
    }
}

#[test]
fn mat_add_vs_reference() {
    let mut r = rng(24);
    let (a, b) = (random_matrix::<3>(&mut r, 9, 9), random_matrix::<3>(&mut r, 9, 9));
    let exact = mat_add(&a.convert::<8>(), &b.convert::<8>()).unwrap();
    assert!(max_rel_dev(&mat_add(&a, &b).unwrap(), &exact) <= 2.0 * Expansion::<3>::EPS);
    let exact = mat_sub(&a.convert::<8>(), &b.convert::<8>()).unwrap();
    let got = mat_sub(&a, &b).unwrap();
    for (g, e) in got.iter().zip(exact.iter()) {
        assert!((g.convert::<8>() - e).leading().abs() <= 2.0 * Expansion::<3>::EPS * e.leading().abs());
    }
}
