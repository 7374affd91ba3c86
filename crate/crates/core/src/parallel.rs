//! Data-parallel primitives shared by the scan and the FCM updates.
//!
//! With the `parallel` feature the helpers fan out over the current rayon
//! pool; without it they run on the calling thread. Every helper keeps its
//! output independent of the worker count: maps preserve index order, and
//! reductions only merge values whose combination is exact (max/argmax) or
//! sum fixed-size chunks in index order.

use crate::error::Result;

/// Number of points per partial sum. Fixed so floating-point reductions do
/// not depend on how many workers are available.
pub(crate) const POINT_CHUNK: usize = 1024;

/// Whether the crate was built with the rayon backend.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Runs `f` with at most `threads` workers available to the helpers in this
/// crate. Without the `parallel` feature this simply calls `f`.
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| crate::Error::ThreadPool(e.to_string()))?;
        Ok(pool.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(f())
    }
}

pub(crate) fn map_indexed<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Folds every index into an accumulator and merges accumulators. `merge`
/// must be associative and exact, since the split points vary with the pool.
pub(crate) fn fold_reduce<A, Id, F, M>(len: usize, identity: Id, fold: F, merge: M) -> A
where
    A: Send,
    Id: Fn() -> A + Sync + Send,
    F: Fn(A, usize) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len)
            .into_par_iter()
            .fold(&identity, &fold)
            .reduce(&identity, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        (0..len).fold(identity(), fold)
    }
}

/// Calls `f(index, chunk)` for each consecutive `width`-sized chunk of `data`.
pub(crate) fn for_each_chunk_mut<F>(data: &mut [f64], width: usize, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(j, chunk)| f(j, chunk));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(width)
            .enumerate()
            .for_each(|(j, chunk)| f(j, chunk));
    }
}

/// Ranges `[start, end)` covering `0..len` in [`POINT_CHUNK`] steps.
pub(crate) fn point_chunks(len: usize) -> Vec<(usize, usize)> {
    (0..len)
        .step_by(POINT_CHUNK)
        .map(|start| (start, (start + POINT_CHUNK).min(len)))
        .collect()
}
