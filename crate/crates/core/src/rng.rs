//! Seeded random streams. Every trial draws from its own ChaCha8 stream,
//! keyed by the master seed and selected by the trial index, so results do
//! not depend on which worker runs which trial.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TrialRng = ChaCha8Rng;

/// The generator for trial `index` under `master`.
pub fn trial_rng(master: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// A child master seed, used to give each row of a sweep its own family of
/// trial streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master ^ 0x9e37_79b9_7f4a_7c15);
    rng.set_stream(index);
    rng.next_u64()
}
