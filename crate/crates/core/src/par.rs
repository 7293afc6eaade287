// Data-parallel helpers that fall back to sequential iteration without the
// `parallel` feature. Callers must pass reductions whose result does not
// depend on grouping or order.

use alloc::vec::Vec;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub(crate) fn map_reduce<T, F, R>(len: usize, map: F, reduce: R) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(map).reduce_with(reduce)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_reduce<T, F, R>(len: usize, map: F, reduce: R) -> Option<T>
where
    F: Fn(usize) -> T,
    R: Fn(T, T) -> T,
{
    (0..len).map(map).reduce(reduce)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, F>(len: usize, map: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..len).into_par_iter().map(map).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, F>(len: usize, map: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(map).collect()
}
