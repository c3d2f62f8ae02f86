//! Data-parallel inner loops with a sequential fallback.
//!
//! All heavy assembly (differential columns, coaction tables, projector
//! application) is a map over independent basis indices. With the
//! `parallel` feature (default) these run on rayon; without it the same
//! closures run sequentially. Results are collected in index order either
//! way, so output is identical.

#[cfg(feature = "parallel")]
pub(crate) fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn run_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}
