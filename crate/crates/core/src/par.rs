//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the hot loops run on rayon; without
//! it everything runs on the calling thread. [`Execution`] lets callers pick
//! a strategy at run time, which the benches use to compare both.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Execution {
    /// `f(0), .., f(n-1)` in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        }
    }

    /// Smallest index in `0..n` satisfying `pred`, independent of scheduling.
    pub fn position_first<F>(self, n: usize, pred: F) -> Option<usize>
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).position(pred),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().position_first(pred),
        }
    }

    /// Fold `0..n` with an associative, commutative combine.
    pub fn fold<T, F, C>(self, n: u64, identity: T, f: F, combine: C) -> T
    where
        T: Send + Sync + Clone,
        F: Fn(u64) -> T + Sync + Send,
        C: Fn(T, T) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..n).map(f).fold(identity, combine),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n)
                .into_par_iter()
                .map(f)
                .reduce(|| identity.clone(), combine),
        }
    }
}
