//! Thin dispatch layer between the rayon-backed data-parallel build (feature
//! `parallel`, on by default) and the sequential fallback. Every helper keeps
//! input order in its output, so results are byte-identical for any worker
//! count — parallelism must never leak into observable output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Run `f` inside a thread pool of `workers` threads (when the parallel
/// feature is enabled and a count is given); otherwise run it directly.
#[cfg(feature = "parallel")]
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(w) if w >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("thread pool construction")
            .install(f),
        _ => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R>(_workers: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}

/// Order-preserving map over a slice.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, U>(items: &[T], f: impl Fn(&T) -> U) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Order-preserving map over an index range.
#[cfg(feature = "parallel")]
pub fn map_range<U: Send>(len: usize, f: impl Fn(usize) -> U + Sync + Send) -> Vec<U> {
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<U>(len: usize, f: impl Fn(usize) -> U) -> Vec<U> {
    (0..len).map(f).collect()
}

/// True when this build dispatches to rayon.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
