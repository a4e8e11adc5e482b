//! Order-preserving data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the work runs on the current rayon pool;
//! without it, or with [`Execution::Sequential`], it runs in a plain loop.
//! Results are always collected in input order, so output never depends on
//! scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run [`Execution::Parallel`] work
    /// concurrently.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// `items.map(f)`, collected in order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// `(0..n).map(f)`, collected in order.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Like [`Execution::map_range`] but stops at the first error in index
    /// order.
    pub fn try_map_range<R, E, F>(self, n: usize, f: F) -> Result<Vec<R>, E>
    where
        R: Send,
        E: Send,
        F: Fn(usize) -> Result<R, E> + Sync + Send,
    {
        self.map_range(n, f).into_iter().collect()
    }
}
