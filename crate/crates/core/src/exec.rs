//! Pluggable execution of independent tasks.
//!
//! Harnesses express their work as `count` independent tasks indexed
//! `0..count` and reduce the results in index order. An executor only decides
//! where the tasks run, so results are identical for every implementation.

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Evaluate `f(0), f(1), ..., f(count - 1)` and return them in index order.
    fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..count).map(f).collect()
    }
}
