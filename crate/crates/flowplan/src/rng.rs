//! Seeded, splittable random number streams.
//!
//! Every stochastic operation in the crate draws from a ChaCha stream derived
//! from an explicit 64-bit seed. Parallel work (flow-tube rollouts, benchmark
//! trials) gets one substream per work item, so results are identical for any
//! thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Mixes `(seed, tag, index)` into a fresh 64-bit seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A root generator for the given seed.
pub fn root(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Substream `index` of the generator family identified by `seed`.
///
/// Substreams are independent ChaCha streams: the seed fixes the key and
/// `index` selects the stream counter.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
