use dftt_core::Executor;
use rayon::prelude::*;

/// Runs tasks on a dedicated rayon pool with a fixed number of workers.
///
/// Results come back in index order, so every harness in `dftt-core` produces
/// identical output for any worker count.
pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()?;
        Ok(Self { pool })
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..count).into_par_iter().with_min_len(16).map(f).collect())
    }
}
