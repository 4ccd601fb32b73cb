//! Deterministic random substreams.
//!
//! Every stream is a ChaCha8 generator whose 64-bit seed is obtained by
//! mixing a parent seed with an index through SplitMix64. Streams derived
//! for distinct `(seed, trial, row)` paths are independent of the order in
//! which they are created, so parallel generation reproduces serial output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed value used throughout the crate.
pub type Seed = u64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `parent` and `index`.
pub fn mix(parent: Seed, index: u64) -> Seed {
    splitmix64(splitmix64(parent) ^ index.wrapping_mul(GOLDEN).rotate_left(17))
}

/// A node in the seed derivation tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Substream {
    seed: Seed,
}

impl Substream {
    pub fn new(seed: Seed) -> Self {
        Substream { seed }
    }

    pub fn child(self, index: u64) -> Self {
        Substream {
            seed: mix(self.seed, index),
        }
    }

    pub fn seed(self) -> Seed {
        self.seed
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
