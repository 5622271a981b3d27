//! Seeding. Every random decision in the crate is a pure function of a
//! 64-bit seed and a position, so work can be split across threads without
//! changing any result.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Root seed of a reproducible computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Seed of the independent sub-stream `index`.
    pub fn child(self, index: u64) -> Seed {
        Seed(derive(self.0, index))
    }

    /// Draws a fresh root seed from an existing generator.
    pub fn draw<R: RngCore + ?Sized>(rng: &mut R) -> Seed {
        Seed(rng.next_u64())
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

impl From<u64> for Seed {
    fn from(v: u64) -> Self {
        Seed(v)
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Counter-based derivation: `derive(s, i)` for distinct `i` behave as
/// independent uniform words.
#[inline]
pub fn derive(seed: u64, index: u64) -> u64 {
    mix64(mix64(seed ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(index.wrapping_mul(0xd1b5_4a32_d192_ed03)))
}

/// Uniform in `[0, 1)` from the top 53 bits of a word.
#[inline]
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Hash of an unordered vertex pair under `seed`, as a uniform in `[0, 1)`.
#[inline]
pub fn pair_uniform(seed: u64, u: usize, v: usize) -> f64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    let key = ((a as u64) << 32) | b as u64;
    unit_f64(derive(seed, key))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_hash_is_symmetric() {
        assert_eq!(pair_uniform(7, 3, 9), pair_uniform(7, 9, 3));
        assert_ne!(pair_uniform(7, 3, 9), pair_uniform(8, 3, 9));
    }

    #[test]
    fn unit_range() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
    }

    #[test]
    fn children_differ() {
        let s = Seed(42);
        assert_ne!(s.child(0), s.child(1));
        assert_eq!(s.child(5), Seed(42).child(5));
    }
}
