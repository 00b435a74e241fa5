//! Seeded RNG construction helpers.
//!
//! Every sampling routine takes a `u64` seed and derives its stream through
//! these helpers, so identical (input, seed) pairs reproduce identical output
//! regardless of what else ran in the process.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent sub-stream, used when one operation needs several
/// unrelated sample sets from a single user-facing seed.
pub(crate) fn subseed(seed: u64, stream: u64) -> u64 {
    // SplitMix64 step on seed ^ stream.
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform point in the axis-aligned box `[lo, hi]^n`.
pub(crate) fn uniform_in_box(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}
