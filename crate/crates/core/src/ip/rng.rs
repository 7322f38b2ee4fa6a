//! Seeded randomness.
//!
//! Every random stream is a ChaCha20 keystream keyed by a 64-bit seed, so
//! generated instances depend only on `(parameters, seed)`. Per-task seeds are
//! derived with SplitMix64 mixing, which keeps results independent of the
//! order tasks are scheduled in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::arith::Rational;

/// Denominator used to quantize continuous quantities to exact rationals.
pub const QUANTUM: i64 = 1_000_000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for task `index` under parent `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub fn stream(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard normal draws by the Box–Muller transform.
pub struct Gaussian {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Gaussian { rng: stream(seed), spare: None }
    }

    pub fn standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite.
        let u1: f64 = 1.0 - self.rng.gen::<f64>();
        let u2: f64 = self.rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn sample(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * self.standard()
    }
}

/// `x` rounded to the nearest multiple of `1 / QUANTUM`.
pub fn quantize(x: f64) -> Rational {
    Rational::new((x * QUANTUM as f64).round() as i64, QUANTUM)
}
