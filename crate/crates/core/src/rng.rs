//! Seeded randomness.
//!
//! Every random draw in the crate flows through [`Rng64`], a ChaCha8 stream
//! keyed by a 64-bit seed. ChaCha8 output and the integer range sampling used
//! here are specified independently of platform word size, so transcripts are
//! bit-reproducible. Child seeds are derived with SplitMix64 so that parallel
//! trials never share a stream.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The crate-wide seeded generator.
pub type Rng64 = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One SplitMix64 step.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from a parent seed and a stream index.
#[inline]
pub fn derive_seed(parent: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ splitmix64(stream.wrapping_add(0xA5A5_A5A5)))
}

/// Derives a child seed along a path of stream indices.
pub fn derive_path(parent: u64, path: &[u64]) -> u64 {
    path.iter().fold(parent, |s, &p| derive_seed(s, p))
}

/// Uniform integer in `[lo, hi)` using 64-bit sampling only.
#[inline]
pub fn uniform_u64<R: RngCore>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    debug_assert!(lo < hi);
    rng.random_range(lo..hi)
}

/// Uniform index in `[0, len)`.
#[inline]
pub fn uniform_index<R: RngCore>(rng: &mut R, len: usize) -> usize {
    uniform_u64(rng, 0, len as u64) as usize
}

/// Uniform `f64` in `[0, 1)` built from the top 53 bits of one 64-bit word.
#[inline]
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Fisher-Yates shuffle driven by [`uniform_u64`].
pub fn shuffle<T, R: RngCore>(rng: &mut R, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = uniform_u64(rng, 0, i as u64 + 1) as usize;
        items.swap(i, j);
    }
}
