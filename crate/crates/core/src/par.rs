//! Data-parallel map with a sequential fallback. Results always come back in
//! input order, so reductions over them are deterministic.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

pub fn map_range<R, F>(exec: Exec, lo: i64, hi: i64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(i64) -> R + Sync + Send,
{
    let idx: Vec<i64> = (lo..=hi).collect();
    map(exec, &idx, |&i| f(i))
}

/// Run `f` inside a pool of `threads` workers (no-op without the parallel feature).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if threads > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(f);
            }
        }
    }
    let _ = threads;
    f()
}
