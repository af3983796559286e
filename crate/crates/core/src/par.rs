//! Block-parallel helpers with a sequential fallback.
//!
//! Every helper splits its index range into blocks whose boundaries depend
//! only on the requested block size, runs the blocks (in parallel when the
//! `parallel` feature is on and the runtime switch allows it) and returns the
//! per-block results in block order. Reductions over those results are done
//! sequentially by the caller, so output never depends on the thread count.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Execution strategy for the block helpers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

/// Selects the strategy used by subsequent calls. `Parallel` silently
/// degrades to `Sequential` when the crate is built without `parallel`.
pub fn set_exec(exec: Exec) {
    PARALLEL.store(exec == Exec::Parallel, Ordering::Relaxed);
}

pub fn exec() -> Exec {
    if cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed) {
        Exec::Parallel
    } else {
        Exec::Sequential
    }
}

/// Splits `range` into consecutive blocks of at most `block` elements.
pub fn blocks(range: Range<u64>, block: u64) -> Vec<Range<u64>> {
    assert!(block > 0, "block size must be positive");
    let mut out = Vec::new();
    let mut lo = range.start;
    while lo < range.end {
        let hi = range.end.min(lo.saturating_add(block));
        out.push(lo..hi);
        lo = hi;
    }
    out
}

/// Maps `f` over fixed blocks of `range`, returning results in block order.
pub fn map_blocks<R, F>(range: Range<u64>, block: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(Range<u64>) -> R + Sync + Send,
{
    map_items(blocks(range, block), f)
}

/// Maps `f` over a vector of work items, preserving order.
pub fn map_items<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    match exec() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.into_par_iter().map(f).collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Runs `f` on disjoint mutable chunks of `data`; `f` receives the chunk's
/// starting index.
pub fn for_chunks_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    assert!(chunk > 0);
    match exec() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i * chunk, c));
        }
        _ => data
            .chunks_mut(chunk)
            .enumerate()
            .for_each(|(i, c)| f(i * chunk, c)),
    }
}

/// Like [`for_chunks_mut`] over two equally sized slices.
pub fn for_chunks_mut2<A, B, F>(a: &mut [A], b: &mut [B], chunk: usize, f: F)
where
    A: Send,
    B: Send,
    F: Fn(usize, &mut [A], &mut [B]) + Sync + Send,
{
    assert_eq!(a.len(), b.len());
    assert!(chunk > 0);
    match exec() {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            a.par_chunks_mut(chunk)
                .zip(b.par_chunks_mut(chunk))
                .enumerate()
                .for_each(|(i, (ca, cb))| f(i * chunk, ca, cb));
        }
        _ => a
            .chunks_mut(chunk)
            .zip(b.chunks_mut(chunk))
            .enumerate()
            .for_each(|(i, (ca, cb))| f(i * chunk, ca, cb)),
    }
}
