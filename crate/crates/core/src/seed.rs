//! Deterministic seed derivation. Every random stream in an experiment is a
//! ChaCha8 generator keyed by a 64-bit seed mixed down from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Master seed used when the caller does not supply one.
pub const DEFAULT_MASTER_SEED: u64 = 0x4e54_5255_5646_4b01;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed number `index` of `parent`.
pub fn derive(parent: u64, index: u64) -> u64 {
    splitmix64(parent ^ splitmix64(index.wrapping_mul(GOLDEN_GAMMA)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
