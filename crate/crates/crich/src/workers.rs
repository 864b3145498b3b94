use std::sync::Arc;

use crich_core::Executor;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Rayon-backed executor; a single job runs inline without a pool.
///
/// `find_map_first` keeps slice order, so results match the sequential
/// executor for any job count.
#[derive(Clone)]
pub struct Workers {
    pool: Option<Arc<ThreadPool>>,
}

impl Workers {
    pub fn new(jobs: usize) -> Self {
        let pool = (jobs > 1).then(|| {
            Arc::new(
                ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .expect("thread pool"),
            )
        });
        Self { pool }
    }

    pub fn jobs(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }
}

impl Executor for Workers {
    fn find_map_first<T, R, F>(&self, items: &[T], f: F) -> Option<(usize, R)>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync,
    {
        match &self.pool {
            None => items.iter().enumerate().find_map(|(i, x)| f(x).map(|r| (i, r))),
            Some(pool) => pool.install(|| {
                items
                    .par_iter()
                    .enumerate()
                    .find_map_first(|(i, x)| f(x).map(|r| (i, r)))
            }),
        }
    }

    fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync,
    {
        match &self.pool {
            None => items.iter().map(f).collect(),
            Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        }
    }
}
