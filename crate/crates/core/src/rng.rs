//! Deterministic random numbers.
//!
//! Every run draws from a [`RandomStream`], a xoshiro256++ generator whose
//! 256-bit state is expanded from a 64-bit seed with SplitMix64 (the
//! `seed_from_u64` convention of `rand_xoshiro`). Uniform reals are built
//! from the top 53 bits of each output: `u = (x >> 11) * 2^-53`, so every
//! draw lies in `[0, 1)` and the sequence is identical on every platform.
//!
//! Independent runs inside a grid or replicate set get their own seed from
//! [`derive_seed`].

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A source of uniform reals in `[0, 1)`.
///
/// The simulation kernels are generic over this trait so tests can script
/// the exact draws a site visit sees.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

/// Seeded xoshiro256++ stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    inner: Xoshiro256PlusPlus,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
}

impl UniformSource for RandomStream {
    #[inline(always)]
    fn next_uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * TWO_POW_MINUS_53
    }
}

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for run `index` of a family sharing `base_seed`.
///
/// `derive_seed(base, i) = splitmix64(base ^ splitmix64(i))`. Distinct
/// indices give unrelated streams and the mapping never depends on which
/// worker thread executes the run.
pub fn derive_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}
