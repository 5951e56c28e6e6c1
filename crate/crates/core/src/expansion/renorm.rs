use super::eft::two_sum;
use super::ulp;

/// Upper bound on the number of raw terms produced by any fixed-size
/// expansion operation (the product of two 8-term expansions needs 65).
pub(crate) const SCRATCH: usize = 96;

/// Renormalizes `terms` in place into `K` components.
///
/// A VecSum pass (bottom-up chain of two-sums) moves the rounded total to
/// `terms[0]`. A top-down walk then emits a component whenever a two-sum
/// leaves a nonzero residual. That walk is only trusted when everything it
/// drops is below one ulp of the last component; otherwise adjacent
/// two-sum sweeps run to a fixed point, where each nonzero term is at most
/// half an ulp of its predecessor. Every step is an exact two-sum.
pub(crate) fn renormalize_in_place<const K: usize>(terms: &mut [f64]) -> [f64; K] {
    let m = terms.len();
    if m == 0 {
        return [0.0; K];
    }
    vec_sum(terms);
    let (mut out, tail) = extract::<K>(terms);
    settle(&mut out);
    if tail <= ulp(out[K - 1]) {
        return out;
    }
    for _ in 0..m {
        if !sweep(terms) {
            break;
        }
    }
    let mut out = [0.0; K];
    let k = K.min(m);
    out[..k].copy_from_slice(&terms[..k]);
    out
}

/// Top-down walk over VecSum output. Also returns a bound on the
/// magnitude of the terms it dropped.
#[inline]
fn extract<const K: usize>(terms: &[f64]) -> ([f64; K], f64) {
    let mut out = [0.0; K];
    let mut j = 0;
    let mut run = terms[0];
    for (i, &t) in terms.iter().enumerate().skip(1) {
        let (r, err) = two_sum(run, t);
        if err != 0.0 {
            out[j] = r;
            j += 1;
            if j == K {
                let tail = terms[i + 1..].iter().fold(err.abs(), |s, t| s + t.abs());
                return (out, tail);
            }
            run = err;
        } else {
            run = r;
        }
    }
    out[j] = run;
    (out, 0.0)
}

/// Bottom-up two-sum sweeps until no adjacent pair changes; at the fixed
/// point `fl(c[i] + c[i+1]) == c[i]` for every pair.
#[inline]
fn settle<const K: usize>(c: &mut [f64; K]) {
    for _ in 0..2 * K {
        if !sweep(c) {
            return;
        }
    }
}

#[inline]
fn vec_sum(terms: &mut [f64]) {
    let m = terms.len();
    let mut s = terms[m - 1];
    for i in (0..m - 1).rev() {
        let (hi, lo) = two_sum(terms[i], s);
        s = hi;
        terms[i + 1] = lo;
    }
    terms[0] = s;
}

/// One bottom-up pass of adjacent two-sums; reports whether anything moved.
#[inline]
fn sweep(c: &mut [f64]) -> bool {
    let mut changed = false;
    for i in (0..c.len() - 1).rev() {
        let (hi, lo) = two_sum(c[i], c[i + 1]);
        if hi != c[i] || lo != c[i + 1] {
            changed = true;
            c[i] = hi;
            c[i + 1] = lo;
        }
    }
    changed
}

/// Sorts by decreasing magnitude, then renormalizes. For inputs with no
/// known ordering.
pub(crate) fn renormalize_unordered<const K: usize>(terms: &mut [f64]) -> [f64; K] {
    terms.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    renormalize_in_place(terms)
}
