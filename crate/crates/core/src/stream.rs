//! Deterministic random streams.
//!
//! A [`SeedStream`] is a 64-bit key. Child streams are derived by mixing the
//! parent key with an index, so the draws of group `l`, sample `j` depend
//! only on `(seed, l, j)` and not on evaluation order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedStream {
    key: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { key: seed }
    }

    /// Independent child stream number `index`.
    pub fn substream(&self, index: u64) -> Self {
        // splitmix64 finalizer over the pair
        let mut z = self
            .key
            .wrapping_add(0x9e37_79b9_7f4a_7c15)
            .rotate_left(17)
            ^ index.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        Self { key: z ^ (z >> 31) }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}
