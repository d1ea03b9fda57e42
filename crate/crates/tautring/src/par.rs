//! Data-parallel helpers. The `parallel` feature backs them with rayon;
//! without it everything runs sequentially through the same entry points.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
pub fn map_collect<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Mode::Parallel => items.par_iter().map(f).collect(),
        Mode::Sequential => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, R, F>(_mode: Mode, items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Caps the worker count; a no-op in sequential builds or once a pool
/// exists.
pub fn set_jobs(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
}
