use anyhow::Result;
use les_core::metabbo::RolloutExecutor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Runs rollout jobs on a rayon pool. Results are collected in job order,
/// so output does not depend on the thread count.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// `threads = 0` uses one thread per available core.
    pub fn new(threads: usize) -> Result<Self> {
        Ok(Self { pool: ThreadPoolBuilder::new().num_threads(threads).build()? })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}

impl RolloutExecutor for RayonExecutor {
    fn map(
        &self,
        count: usize,
        job: &(dyn Fn(usize) -> les_core::Result<f64> + Sync),
    ) -> les_core::Result<Vec<f64>> {
        self.pool.install(|| (0..count).into_par_iter().map(job).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use les_core::metabbo::SequentialExecutor;

    #[test]
    fn matches_sequential() {
        let job = |i: usize| Ok((i as f64).sin());
        let par = RayonExecutor::new(3).unwrap().map(100, &job).unwrap();
        assert_eq!(par, SequentialExecutor.map(100, &job).unwrap());
    }
}
