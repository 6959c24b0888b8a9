//! Seed discipline: all randomness in the crate flows from a single 64-bit
//! master seed. Sub-streams (retry attempts, per-copy families) are derived
//! by mixing a tag into the master seed, so runs are reproducible bit-for-bit
//! and independent sub-streams never alias.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed for the sub-stream `tag` of `master`.
pub fn derive_seed(master: u64, tag: u64) -> u64 {
    splitmix64(master ^ splitmix64(tag))
}

/// Seeded generator for the sub-stream `tag` of `master`.
pub fn stream(master: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag))
}
