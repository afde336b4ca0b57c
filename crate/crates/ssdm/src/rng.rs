//! Deterministic, splittable random streams.
//!
//! Every stochastic component of the pipeline owns an [`RngStream`] derived
//! from a master seed by a chain of integer tags (stage, trajectory index,
//! batch example, ...). Derivation depends only on the parent seed and the
//! tag, never on how many draws the parent has made, so work distributed
//! across any number of workers reproduces bit-identical results as long as
//! each unit of work derives its own stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// splitmix64 finalizer; good 64-bit avalanche for tag mixing.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A seeded counter-based random stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    draws: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            draws: 0,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Child stream keyed by `(self.seed, tag)`. Independent of draw position.
    pub fn derive(&self, tag: u64) -> Self {
        Self::new(mix64(self.seed ^ mix64(tag)))
    }

    /// Seed this stream was constructed with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of draws made so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    /// Standard normal draw.
    pub fn normal(&mut self) -> f64 {
        self.draws += 1;
        self.inner.sample(StandardNormal)
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.inner.random::<f64>()
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0) is undefined");
        self.draws += 1;
        self.inner.random_range(0..n)
    }

    /// Uniform integer in [lo, hi] inclusive.
    pub fn int_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        self.draws += 1;
        self.inner.random_range(lo..=hi)
    }
}
