//! Pluggable evaluation strategy for independent per-member work.
//!
//! The core stays single-threaded and `no_std`; a threaded executor lives in
//! the `clonesched` crate. Results of every executor must match [`Serial`]
//! exactly, which holds as long as `f` is pure in its arguments.

use alloc::vec::Vec;

pub trait Executor {
    /// Applies `f(index, item)` to every item and returns the results in
    /// input order.
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync + Send,
    {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}
