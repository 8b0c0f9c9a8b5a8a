//! Seeded randomness. Every stochastic component draws from a ChaCha8
//! stream so results are reproducible across platforms.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng as Rng64;

pub fn seeded_rng(seed: u64) -> Rng64 {
    Rng64::seed_from_u64(seed)
}
