//! Trial fan-out: data-parallel with rayon when the `parallel` feature is
//! on, plain sequential otherwise. Results are collected by trial index,
//! so both paths produce identical output.
//!
//! The `DECLIP_THREADS` environment variable caps the worker count
//! (`0` or unset means the rayon default); it is read once per process.

/// Run `f` for every trial index sequentially.
pub fn map_trials_sequential<T, F>(trials: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..trials).map(f).collect()
}

#[cfg(feature = "parallel")]
mod parallel_impl {
    use rayon::prelude::*;
    use std::sync::OnceLock;

    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();

    fn pool() -> &'static Option<rayon::ThreadPool> {
        POOL.get_or_init(|| {
            let n: usize = std::env::var("DECLIP_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(0);
            if n == 0 {
                None
            } else {
                Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .expect("thread pool construction"),
                )
            }
        })
    }

    /// Run `f` for every trial index on the worker pool.
    pub fn map_trials_parallel<T, F>(trials: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let run = || (0..trials).into_par_iter().map(&f).collect();
        match pool() {
            Some(p) => p.install(run),
            None => run(),
        }
    }
}

#[cfg(feature = "parallel")]
pub use parallel_impl::map_trials_parallel;

/// Fan a trial body out over the available workers (or run it sequentially
/// without the `parallel` feature).
pub fn map_trials<T, F>(trials: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        map_trials_parallel(trials, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_trials_sequential(trials, f)
    }
}
