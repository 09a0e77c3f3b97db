//! Seedable, forkable random streams.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha`) keyed from a 64-bit
//! seed. ChaCha is a counter-based cipher whose output is specified bit for
//! bit, so a given seed yields the same sequence on every platform. Child
//! streams are derived with SplitMix64 mixing, never by sharing a generator
//! between threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a list of words, used for trial seed derivation.
pub fn mix_seed(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x6A09_E667_F3BC_C908, |acc, &w| splitmix64(acc ^ splitmix64(w)))
}

#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream. Depends only on the parent seed and `index`,
    /// not on how much of the parent has been consumed.
    pub fn fork(&self, index: u64) -> RandomStream {
        RandomStream::new(mix_seed(&[self.seed, index]))
    }

    /// Uniform draw on the open interval (0, 1).
    ///
    /// Uses the top 53 bits of a word, offset by half a step, so neither 0
    /// nor 1 can be produced.
    pub fn open_unit(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.open_unit();
        let u2 = self.open_unit();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * angle.sin());
        r * angle.cos()
    }
}
