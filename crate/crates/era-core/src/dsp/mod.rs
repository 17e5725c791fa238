//! Shared numeric kernels: FFT/IFFT, Gray-coded constellations, seeded RNG
//! streams, and complex AWGN.
//!
//! Everything here is pure and allocation-light; the OFDM, channel, and
//! attacker modules build on these primitives.

mod constellation;
mod fft;
mod rng;

pub use constellation::{map_bits, demap_bits, Constellation};
pub use fft::{fft, ifft, naive_dft};
pub use rng::{awgn, splitmix64, RngStream};

use thiserror::Error;

/// Errors raised by the DSP kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DspError {
    /// FFT input length must be a power of two.
    #[error("transform length {0} is not a power of two")]
    NonPowerOfTwoLength(usize),
    /// Bit count does not divide into whole symbols.
    #[error("bit count {count} is not divisible by {bits_per_symbol} bits per symbol")]
    BitFraming {
        count: usize,
        bits_per_symbol: usize,
    },
    /// Noise variance must be non-negative.
    #[error("noise variance {0} is negative")]
    NegativeVariance(f64),
    /// Unsupported constellation order.
    #[error("constellation order {0} not supported (expected 2, 4, 16, or 64)")]
    BadOrder(usize),
}
