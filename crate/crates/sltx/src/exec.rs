//! A scoped-thread executor for the spectrum scan.

use std::num::NonZeroUsize;
use std::thread;

use sltx_core::spectrum::Executor;

/// Splits each map into contiguous chunks, one per worker thread, and
/// reassembles the results in input order.
#[derive(Debug, Clone, Copy)]
pub struct Threads {
    workers: usize,
}

impl Threads {
    pub fn new(workers: usize) -> Self {
        Self { workers: workers.max(1) }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Self::new(thread::available_parallelism().map_or(1, NonZeroUsize::get))
    }
}

impl Executor for Threads {
    fn map<T: Sync, R: Send>(&self, items: &[T], f: &(dyn Fn(&T) -> R + Sync)) -> Vec<R> {
        if self.workers == 1 || items.len() < 2 {
            return items.iter().map(f).collect();
        }
        let chunk = items.len().div_ceil(self.workers);
        thread::scope(|s| {
            let handles: Vec<_> =
                items.chunks(chunk).map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<_>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sltx_core::spectrum::{locate_eigenvalues_with, Sequential};
    use sltx_core::{validate, ProblemSpec};

    #[test]
    fn preserves_order() {
        let v: Vec<u32> = (0..101).collect();
        assert_eq!(Threads::new(4).map(&v, &|x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn threaded_scan_matches_sequential() {
        let p = validate(ProblemSpec::reference()).unwrap();
        let a = locate_eigenvalues_with(&p, 8, &Sequential).unwrap();
        let b = locate_eigenvalues_with(&p, 8, &Threads::new(3)).unwrap();
        assert_eq!(a, b);
    }
}
