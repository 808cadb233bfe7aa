//! Seed derivation for independent, reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every stochastic path in the crate.
pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `tag` into `base`, giving a seed for a sub-stream.
pub fn derive(base: u64, tag: u64) -> u64 {
    splitmix64(base ^ splitmix64(tag))
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Stream tags, so that unrelated consumers of one base seed never collide.
pub mod tag {
    pub const TARGET_PROFILE: u64 = 1;
    pub const BASELINE: u64 = 2;
    pub const RUN: u64 = 3;
    pub const INIT: u64 = 4;
    pub const MUTATE: u64 = 5;
    pub const EVALUATE: u64 = 6;
    pub const PROFILE: u64 = 7;
    pub const REEVALUATE: u64 = 8;
    pub const SMACOF: u64 = 9;
    pub const CANONICAL: u64 = 10;
    pub const FINAL: u64 = 11;
}
