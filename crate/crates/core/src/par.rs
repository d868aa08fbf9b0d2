//! Sharded map/reduce over index ranges.
//!
//! With the `parallel` feature the work runs on the current rayon pool,
//! otherwise sequentially. Reductions are associative and commutative for
//! every caller, so results do not depend on how the range is split.

use std::ops::Range;

/// Folds `range` into per-shard accumulators built by `init`, then merges
/// them with `reduce`.
#[cfg(feature = "parallel")]
pub fn fold_reduce<T, I, F, R>(range: Range<usize>, init: I, fold: F, reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range
        .into_par_iter()
        .fold(&init, &fold)
        .reduce(&init, &reduce)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_reduce<T, I, F, R>(range: Range<usize>, init: I, fold: F, _reduce: R) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(T, usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    range.fold(init(), fold)
}

/// Order-preserving map with a per-worker scratch value.
#[cfg(feature = "parallel")]
pub fn map_with<S, T, I, F>(range: Range<usize>, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    range.into_par_iter().map_init(&init, &f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_with<S, T, I, F>(range: Range<usize>, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    let mut scratch = init();
    range.map(|i| f(&mut scratch, i)).collect()
}

/// Order-preserving map.
pub fn map<T, F>(range: Range<usize>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_with(range, || (), |_, i| f(i))
}

/// Number of worker threads the current context would use.
pub fn current_workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
