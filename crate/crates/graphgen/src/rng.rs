//! Named deterministic random streams.
//!
//! All randomness in this crate comes from ChaCha8 keyed by a 64-bit seed
//! (`ChaCha8Rng::seed_from_u64`), with independent substreams selected
//! through ChaCha's 64-bit stream counter. Seeds for parallel workers derive
//! from a base seed and a worker index via one SplitMix64 step, so every
//! worker owns a reproducible stream and no two workers share one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 generator for substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives the seed for parallel stream `index` of `base` (SplitMix64).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
