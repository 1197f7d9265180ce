//! Worker pool for independent cases.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{AppError, AppResult};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "FRACGALERKIN_THREADS";

/// Pool sized by [`THREADS_ENV`] when set, otherwise by rayon's default.
pub fn pool() -> AppResult<ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| AppError::usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| AppError::usage(format!("thread pool: {e}")))
}

/// `items.map(f)` on the pool; results keep the input order.
pub fn map<T: Sync, R: Send>(
    pool: &ThreadPool,
    items: &[T],
    f: impl Fn(&T) -> AppResult<R> + Sync + Send,
) -> AppResult<Vec<R>> {
    pool.install(|| items.par_iter().map(f).collect())
}
