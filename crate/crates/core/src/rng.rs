//! Deterministic seeded randomness. Every random choice in the crate flows
//! from a `u64` seed through [`stream`], never from ambient entropy.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Independent generator number `stream` derived from `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn from_seed(seed: u64) -> Rng {
    stream(seed, 0)
}
