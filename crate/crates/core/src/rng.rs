//! Counter-based random streams: every draw is addressed by a seed and an
//! integer key, so work can be split across threads in any way without
//! changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Combines a multi-part key into one stream number.
pub fn mix_key(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C908, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Hands out independent ChaCha8 streams for one seed.
#[derive(Debug, Clone)]
pub struct StreamFactory {
    base: ChaCha8Rng,
}

impl StreamFactory {
    pub fn new(seed: u64) -> Self {
        StreamFactory {
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The stream for a single integer key.
    pub fn stream(&self, key: u64) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(key);
        rng.set_word_pos(0);
        rng
    }

    /// The stream for a composite key such as `(n, kappa_index, trial)`.
    pub fn keyed(&self, parts: &[u64]) -> ChaCha8Rng {
        self.stream(mix_key(parts))
    }
}
