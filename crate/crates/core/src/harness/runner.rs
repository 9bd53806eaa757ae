use std::ops::Range;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Worker pool for embarrassingly parallel trials.
///
/// Results come back in trial order whatever the worker count, so any
/// aggregation done afterwards is order-fixed.
pub struct Runner {
    workers: usize,
    pool: Option<ThreadPool>,
}

impl Runner {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let workers = workers.max(1);
        let pool = if workers == 1 {
            None
        } else {
            Some(ThreadPoolBuilder::new().num_threads(workers).build()?)
        };
        Ok(Self { workers, pool })
    }

    pub fn serial() -> Self {
        Self { workers: 1, pool: None }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn map<T, F>(&self, trials: Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match &self.pool {
            None => trials.map(f).collect(),
            Some(pool) => pool.install(|| trials.into_par_iter().map(f).collect()),
        }
    }
}

impl Default for Runner {
    fn default() -> Self {
        Self::serial()
    }
}

impl std::fmt::Debug for Runner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Runner").field("workers", &self.workers).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_independent_of_workers() {
        let f = |i: u64| crate::harness::seed::trial_seed(7, "t", i);
        let a = Runner::serial().map(0..500, f);
        let b = Runner::new(4).unwrap().map(0..500, f);
        assert_eq!(a, b);
    }
}
