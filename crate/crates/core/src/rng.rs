//! Portable seeded random stream for mask generation.
//!
//! The stream is SplitMix64 (Steele, Lea & Flood) seeded directly with the
//! user's 64-bit seed. Derived quantities are defined here rather than
//! delegated to a general-purpose RNG library so that masks can be reproduced
//! bit-for-bit by any implementation:
//!
//! * uniform `f64` in `[0, 1)`: `(next_u64() >> 11) * 2^-53`;
//! * integer in `[0, bound)`: draw `x` until `x >= (2^64 - bound) mod bound`,
//!   then return `x mod bound`.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct MaskRng {
    inner: SplitMix64,
}

impl MaskRng {
    pub fn new(seed: u64) -> Self {
        MaskRng {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased integer in `[0, bound)`. Panics when `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }
}
