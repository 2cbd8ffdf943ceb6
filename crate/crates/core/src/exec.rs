//! Sequential vs. rayon execution of data-parallel loops.
//!
//! Work items handed to [`Exec`] must write disjoint outputs; nothing here
//! reduces across items, so both policies produce bitwise-identical results.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    #[cfg_attr(not(feature = "rayon"), default)]
    Sequential,
    #[cfg(feature = "rayon")]
    #[default]
    Parallel,
}

impl Exec {
    /// Runs `f(i, chunk)` over consecutive `chunk_len`-sized pieces of `out`.
    pub fn for_each_chunk<F>(self, out: &mut [f64], chunk_len: usize, f: F)
    where
        F: Fn(usize, &mut [f64]) + Sync + Send,
    {
        if chunk_len == 0 {
            return;
        }
        match self {
            Exec::Sequential => out
                .chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
            #[cfg(feature = "rayon")]
            Exec::Parallel => out
                .par_chunks_mut(chunk_len)
                .enumerate()
                .for_each(|(i, c)| f(i, c)),
        }
    }

    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "rayon")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }
}
