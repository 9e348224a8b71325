//! Seeded random streams.
//!
//! The generator is xoshiro256++ seeded through SplitMix64. Reals are the top
//! 53 bits of a draw scaled by 2^-53, so they lie in [0, 1) and are identical
//! on every platform. Trial `t` of a run seeded with `s` uses its own stream
//! seeded with `s ^ mix(t)`, where `mix` is the SplitMix64 finalizer; adding
//! trials never changes the draws of existing ones.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Stream {
    rng: Xoshiro256PlusPlus,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Stream for one trial of a seeded run.
    pub fn substream(seed: u64, trial: u64) -> Self {
        Self::new(seed ^ mix(trial))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// `count` points uniform in the box `[lo, hi]^dim`.
    pub fn points(&mut self, count: usize, dim: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
        (0..count)
            .map(|_| (0..dim).map(|_| self.uniform_in(lo, hi)).collect())
            .collect()
    }
}

pub fn prng_stream(seed: u64) -> Stream {
    Stream::new(seed)
}
