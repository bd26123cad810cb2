//! Seeded, platform-independent random number stream.
//!
//! Every stochastic operation in this crate draws from an [`RngStream`],
//! which wraps ChaCha8: a fixed, portable generator whose output depends
//! only on the seed and stream id, never on the platform. Two streams
//! built from the same `(seed, stream)` pair produce identical draw
//! sequences, which is what makes whole experiment runs reproducible
//! bit-for-bit.

use std::convert::Infallible;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng, TryRng};
use rand_chacha::ChaCha8Rng;

/// A seeded random stream. Cheap to create, owned by exactly one logical
/// thread of execution; for independent sub-streams of the same seed use
/// distinct stream ids via [`RngStream::with_stream`].
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// An independent stream of the given seed. ChaCha keys 2^64 streams
    /// per seed; different ids never overlap.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        RngStream { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random()
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.inner.random_range(lo..hi)
    }

    /// Uniform index from `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }

    /// Bernoulli draw: true with probability `p` (`p >= 1` is always true).
    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Fisher-Yates shuffle in place.
    pub fn shuffle<T>(&mut self, values: &mut [T]) {
        values.shuffle(&mut self.inner);
    }
}

// Delegating the raw word source lets rand's distributions (uniform
// ranges, normal, exponential) sample straight off the stream.
impl TryRng for RngStream {
    type Error = Infallible;

    fn try_next_u32(&mut self) -> Result<u32, Infallible> {
        self.inner.try_next_u32()
    }

    fn try_next_u64(&mut self) -> Result<u64, Infallible> {
        self.inner.try_next_u64()
    }

    fn try_fill_bytes(&mut self, dst: &mut [u8]) -> Result<(), Infallible> {
        self.inner.try_fill_bytes(dst)
    }
}
