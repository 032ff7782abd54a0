//! Seed derivation for sweeps.
//!
//! Point `i` of a sweep driven by master seed `m` uses
//! `splitmix64(m + (i + 1) * 0x9E3779B97F4A7C15)` as its own seed, and all
//! randomness for that point comes from a ChaCha8 generator seeded with it.
//! The scheme depends only on `(m, i)`, so rows can be computed in any order
//! on any number of workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for sweep point `index` under `master`.
pub fn point_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
