//! Seed derivation helpers.
//!
//! All stochastic operations take an explicit 64-bit seed and build a
//! `ChaCha8Rng` from it, so results are bit-identical across platforms and
//! thread counts. Sub-streams (e.g. the field draw vs. the point draw inside
//! one LGCP replication) are derived with a SplitMix64 mix rather than by
//! reusing one generator, which keeps each stage's stream independent of how
//! many values earlier stages consumed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a base seed and a stream tag.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    splitmix64(base ^ splitmix64(stream))
}

/// Deterministic RNG for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
