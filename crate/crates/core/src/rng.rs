//! Seeded random streams.
//!
//! Uniform streams come from ChaCha8 keyed by the 64-bit seed (via
//! `SeedableRng::seed_from_u64`); each uniform takes the top 53 bits of one
//! `next_u64` output, giving a value in `[0, 1)` with spacing `2^-53`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function; a bijection on `u64`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable seed for trial `t` of an experiment with seed `master`.
///
/// For a fixed `master` the map `t -> seed` is injective over all `u64`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master.wrapping_add(trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Deterministic stream of uniforms in `[0, 1)`.
pub struct UniformStream {
    rng: ChaCha8Rng,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn trial_seeds_are_distinct() {
        let seeds: HashSet<u64> = (0..100_000).map(|t| trial_seed(42, t)).collect();
        assert_eq!(seeds.len(), 100_000);
    }

    #[test]
    fn uniforms_are_half_open() {
        let mut s = UniformStream::new(9);
        for _ in 0..10_000 {
            let u = s.next_uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
