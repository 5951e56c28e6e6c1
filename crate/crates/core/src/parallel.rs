//! Thread-count plumbing. Every kernel takes an explicit `threads`
//! argument; `1` (or `0`) always means serial execution on the caller's
//! thread.

/// Runs `f` on a pool of `threads` workers, or inline when `threads <= 1`.
pub(crate) fn install<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 1 {
            return pool(threads).install(f);
        }
    }
    let _ = threads;
    f()
}

/// Whether work inside an [`install`] scope should fan out.
#[cfg(feature = "parallel")]
#[inline]
fn fan_out(threads: usize) -> bool {
    threads > 1
}

#[cfg(feature = "parallel")]
fn pool(threads: usize) -> std::sync::Arc<rayon::ThreadPool> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};

    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool cache");
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

/// Applies `f` to every chunk, in parallel when `threads > 1`.
pub(crate) fn for_each_chunk<T: Send>(
    threads: usize,
    data: &mut [T],
    chunk: usize,
    f: impl Fn(usize, &mut [T]) + Sync + Send,
) {
    let chunk = chunk.max(1);
    #[cfg(feature = "parallel")]
    {
        if fan_out(threads) {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
            return;
        }
    }
    let _ = threads;
    for (i, c) in data.chunks_mut(chunk).enumerate() {
        f(i, c);
    }
}

/// `(a(), b())`, concurrently when `threads > 1`.
pub(crate) fn join<A: Send, B: Send>(
    threads: usize,
    a: impl FnOnce() -> A + Send,
    b: impl FnOnce() -> B + Send,
) -> (A, B) {
    #[cfg(feature = "parallel")]
    {
        if fan_out(threads) {
            return rayon::join(a, b);
        }
    }
    let _ = threads;
    (a(), b())
}
