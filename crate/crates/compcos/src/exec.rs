//! Thread-pool executor for the Monte Carlo engines.

use compcos_core::mc::Accumulator;
use compcos_core::{Executor, Result};
use rayon::prelude::*;

/// Runs partitions on the rayon global pool. Results come back indexed by
/// partition, so the reduction order (and the estimate) is the same as with
/// [`compcos_core::Sequential`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn run(
        &self,
        partitions: usize,
        job: &(dyn Fn(usize) -> Result<Accumulator> + Sync),
    ) -> Vec<Result<Accumulator>> {
        (0..partitions).into_par_iter().map(job).collect()
    }
}
