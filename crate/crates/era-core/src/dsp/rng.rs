//! Deterministic, stream-splittable randomness.
//!
//! Every Monte-Carlo trial owns one [`RngStream`] identified by a
//! `(seed, stream)` pair. Streams with distinct ids are statistically
//! independent and may be consumed in any order, which is what makes the
//! experiment harness reproducible regardless of thread count.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DspError;

/// SplitMix64 mixing step. Used to derive stream ids from path components.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-mode random stream keyed by `(seed, stream)`.
///
/// Identical key -> identical sample sequence, independent of how many other
/// streams were consumed before it.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, seed, stream }
    }

    /// Derives a stream id by hashing the path components, e.g.
    /// `(experiment id, grid index, trial index)`.
    pub fn from_path(seed: u64, path: &[u64]) -> Self {
        let mut id = splitmix64(seed);
        for &p in path {
            id = splitmix64(id ^ splitmix64(p));
        }
        Self::new(seed, id)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform sample in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// One random bit.
    pub fn next_bit(&mut self) -> bool {
        self.rng.gen::<bool>()
    }

    /// `count` random payload bits.
    pub fn bits(&mut self, count: usize) -> Vec<bool> {
        (0..count).map(|_| self.next_bit()).collect()
    }

    /// Standard-normal pair via Box-Muller.
    pub fn next_normal_pair(&mut self) -> (f64, f64) {
        let u1: f64 = 1.0 - self.rng.gen::<f64>(); // (0, 1]
        let u2: f64 = self.rng.gen();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// Circularly symmetric complex Gaussian with `E|z|^2 = variance`.
    pub fn next_cn(&mut self, variance: f64) -> Complex64 {
        let (a, b) = self.next_normal_pair();
        let s = (variance / 2.0).sqrt();
        Complex64::new(s * a, s * b)
    }

    /// Uniform phase on the unit circle.
    pub fn next_phase(&mut self) -> f64 {
        2.0 * std::f64::consts::PI * self.next_f64()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Adds circularly symmetric complex Gaussian noise with per-sample variance
/// `variance` (`variance/2` per real dimension). `variance == 0` returns the
/// input untouched.
pub fn awgn(
    samples: &[Complex64],
    variance: f64,
    rng: &mut RngStream,
) -> Result<Vec<Complex64>, DspError> {
    if variance < 0.0 {
        return Err(DspError::NegativeVariance(variance));
    }
    if variance == 0.0 {
        return Ok(samples.to_vec());
    }
    Ok(samples.iter().map(|&s| s + rng.next_cn(variance)).collect())
}
