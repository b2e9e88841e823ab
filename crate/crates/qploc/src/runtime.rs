//! Wall clock and a thread pool for pair separation.

use std::time::Instant;

use qploc_core::clock::Clock;
use qploc_core::transport::{CutPart, PairExecutor};
use qploc_core::Result;

/// Seconds since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn new() -> Self {
        WallClock(Instant::now())
    }
}

impl Default for WallClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for WallClock {
    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// Splits tasks into contiguous blocks, one scoped thread per block.
#[derive(Debug, Clone, Copy)]
pub struct Threaded {
    workers: usize,
}

impl Threaded {
    /// `0` uses the available parallelism.
    pub fn new(workers: usize) -> Self {
        let workers = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        Threaded { workers }
    }
}

impl PairExecutor for Threaded {
    fn map(
        &self,
        tasks: usize,
        f: &(dyn Fn(usize) -> Result<CutPart> + Sync),
    ) -> Vec<Result<CutPart>> {
        if self.workers <= 1 || tasks <= 1 {
            return (0..tasks).map(f).collect();
        }
        let block = tasks.div_ceil(self.workers);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..tasks)
                .step_by(block)
                .map(|start| {
                    let end = (start + block).min(tasks);
                    s.spawn(move || (start..end).map(f).collect::<Vec<_>>())
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("separation worker panicked"))
                .collect()
        })
    }

    fn workers(&self) -> usize {
        self.workers
    }
}
