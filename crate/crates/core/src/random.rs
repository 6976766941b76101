//! Seedable random streams.
//!
//! Every stochastic operation in the crate draws through [`UniformSource`], so
//! tests can pin individual draws while runs use a [`RngStream`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// The two primitive draws used by the rules: a real in `[0, 1)` and an
/// integer in an inclusive range.
pub trait UniformSource {
    /// A real value in `[0, 1)`.
    fn uniform_real(&mut self) -> f64;

    /// An integer in `[lo, hi]`, each value equally likely.
    fn uniform_int(&mut self, lo: i64, hi: i64) -> Result<i64>;

    /// Zero-based index in `[0, n)`. `n` must be positive.
    fn uniform_index(&mut self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::argument("cannot draw an index from an empty range"));
        }
        Ok(self.uniform_int(0, n as i64 - 1)? as usize)
    }
}

/// Deterministic pseudo-random stream. One stream per run; never shared.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Stream for run `index` of an experiment seeded with `master`.
    pub fn for_run(master: u64, index: u64) -> Self {
        Self::new(derive_seed(master, index))
    }
}

impl UniformSource for RngStream {
    fn uniform_real(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    fn uniform_int(&mut self, lo: i64, hi: i64) -> Result<i64> {
        if lo > hi {
            return Err(Error::argument(format!(
                "empty integer range [{lo}, {hi}]"
            )));
        }
        Ok(self.rng.gen_range(lo..=hi))
    }
}

/// Per-run seed derivation: the splitmix64 finalizer applied to
/// `master ^ splitmix64(index)`. Stable across platforms and releases.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x9E37_79B9_7F4A_7C15)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use std::collections::VecDeque;

    /// Replays scripted draws; falls back to a fixed value once exhausted.
    #[derive(Debug, Default)]
    pub struct ScriptedSource {
        pub reals: VecDeque<f64>,
        pub ints: VecDeque<i64>,
        pub default_real: f64,
    }

    impl ScriptedSource {
        pub fn constant(real: f64) -> Self {
            Self {
                default_real: real,
                ..Default::default()
            }
        }
    }

    impl UniformSource for ScriptedSource {
        fn uniform_real(&mut self) -> f64 {
            self.reals.pop_front().unwrap_or(self.default_real)
        }

        fn uniform_int(&mut self, lo: i64, hi: i64) -> Result<i64> {
            if lo > hi {
                return Err(Error::argument("empty range"));
            }
            Ok(self.ints.pop_front().unwrap_or(lo).clamp(lo, hi))
        }
    }
}
