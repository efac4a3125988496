//! Sampling-based verification of the EL properties and of S-feasibility,
//! the normal-ratio lower bound, and the bracket report on the optimum.
//!
//! Sampling is deterministic: the sample budget is cut into fixed-size
//! chunks, chunk `k` draws from the ChaCha stream `k` of the master seed, and
//! chunk results are reduced in chunk order. Chunks run in parallel without
//! changing any reported number.

mod bound;
mod fd;
mod suite;

pub use bound::{gap_report, theorem1_bound, theorem1_bound_sampled, BoundReport, BoundWitness};
pub use fd::{fd_partial, fd_step, FnFunction};
pub use suite::{check_el, check_el_with, check_feasible, check_feasible_with, ElReport, FeasibilityReport, Property, PropertyVerdict, SuiteOptions, Witness};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Samples per chunk; fixes the stream layout, so changing it changes
/// results for a given seed.
pub const CHUNK: usize = 256;

pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

pub(crate) fn chunks(samples: usize) -> Vec<(usize, usize)> {
    (0..samples.div_ceil(CHUNK))
        .map(|k| (k, CHUNK.min(samples - k * CHUNK)))
        .collect()
}
