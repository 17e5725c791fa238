//! End-to-end OFDM packet chain.
//!
//! A packet is one full-band BPSK pilot symbol followed by `D` data symbols.
//! The receiver estimates the channel from the pilot once (least squares),
//! equalizes every data symbol with that estimate (zero forcing), and never
//! updates it mid-packet — which is exactly the staleness the attack
//! exploits.
//!
//! ## Transmit chain per packet
//!
//! ```text
//! payload -> conv encode (K=7, 133/171) -> puncture -> per-symbol interleave
//!         -> Gray map -> subcarrier grid -> IFFT -> +CP
//! ```
//!
//! The receive chain mirrors it with hard decisions and erasure-aware
//! depuncturing; a packet counts as correct only if the decoded payload is
//! bit-exact (genie comparison, no CRC).

mod packet;

pub use packet::{build_packet, receive_packet, OfdmPacket, RxReport};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::{splitmix64, DspError};
use crate::fec::{CodeRate, FecError, Interleaver, TAIL_BITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OfdmError {
    #[error("payload has {got} bits, config requires {expected}")]
    PayloadSize { got: usize, expected: usize },
    #[error("pilot symbol contains a zero; LS estimate undefined")]
    ZeroPilot,
    #[error("sample stream has {got} samples, packet needs {expected}")]
    SampleCount { got: usize, expected: usize },
    #[error("invalid OFDM/MCS combination: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Fec(#[from] FecError),
    #[error(transparent)]
    Dsp(#[from] DspError),
}

// ---------------------------------------------------------------------------
// MCS table
// ---------------------------------------------------------------------------

/// Modulation and coding scheme, indices 0-7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McsProfile {
    pub index: u8,
    /// Constellation order on the subcarriers.
    pub order: usize,
    pub rate: CodeRate,
}

impl McsProfile {
    pub fn from_index(index: u8) -> Option<Self> {
        let (order, rate) = match index {
            0 => (2, CodeRate::Half),
            1 => (4, CodeRate::Half),
            2 => (4, CodeRate::ThreeQuarters),
            3 => (16, CodeRate::Half),
            4 => (16, CodeRate::ThreeQuarters),
            5 => (64, CodeRate::TwoThirds),
            6 => (64, CodeRate::ThreeQuarters),
            7 => (64, CodeRate::FiveSixths),
            _ => return None,
        };
        Some(Self { index, order, rate })
    }

    pub fn all() -> impl Iterator<Item = McsProfile> {
        (0..8).map(|i| Self::from_index(i).unwrap())
    }

    pub fn bits_per_subcarrier(&self) -> usize {
        self.order.trailing_zeros() as usize
    }
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

/// OFDM numerology. Defaults give a 4 us symbol at 40 MHz and a 16-symbol
/// (64 us) data portion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OfdmConfig {
    #[serde(default = "d_fft")]
    pub fft_size: usize,
    #[serde(default = "d_data_sc")]
    pub data_subcarriers: usize,
    #[serde(default = "d_cp")]
    pub cp_len: usize,
    /// Data symbols per packet (one pilot symbol is always prepended).
    #[serde(default = "d_symbols")]
    pub data_symbols: usize,
    #[serde(default = "d_rate")]
    pub sample_rate: f64,
}

fn d_fft() -> usize {
    128
}
fn d_data_sc() -> usize {
    108
}
fn d_cp() -> usize {
    32
}
fn d_symbols() -> usize {
    16
}
fn d_rate() -> f64 {
    40e6
}

impl Default for OfdmConfig {
    fn default() -> Self {
        Self {
            fft_size: d_fft(),
            data_subcarriers: d_data_sc(),
            cp_len: d_cp(),
            data_symbols: d_symbols(),
            sample_rate: d_rate(),
        }
    }
}

impl OfdmConfig {
    pub fn symbol_len(&self) -> usize {
        self.fft_size + self.cp_len
    }

    pub fn packet_samples(&self) -> usize {
        (1 + self.data_symbols) * self.symbol_len()
    }

    /// OFDM symbol duration in seconds (CP included).
    pub fn symbol_duration(&self) -> f64 {
        self.symbol_len() as f64 / self.sample_rate
    }

    /// Whole packet duration in seconds (pilot + data).
    pub fn packet_duration(&self) -> f64 {
        self.packet_samples() as f64 / self.sample_rate
    }

    /// Duration of the data portion only.
    pub fn data_duration(&self) -> f64 {
        self.data_symbols as f64 * self.symbol_duration()
    }

    /// Occupied data bins: symmetric around DC, DC itself unused.
    pub fn data_bins(&self) -> Vec<usize> {
        let half = self.data_subcarriers / 2;
        (1..=half)
            .chain(self.fft_size - half..self.fft_size)
            .collect()
    }

    /// Coded bits carried by one OFDM symbol.
    pub fn coded_bits_per_symbol(&self, mcs: &McsProfile) -> usize {
        self.data_subcarriers * mcs.bits_per_subcarrier()
    }

    /// Information bits carried by one OFDM symbol.
    pub fn data_bits_per_symbol(&self, mcs: &McsProfile) -> Result<usize, OfdmError> {
        let coded = self.coded_bits_per_symbol(mcs);
        let (num, den) = mcs.rate.fraction();
        if coded * num % den != 0 {
            return Err(OfdmError::BadConfig(format!(
                "coded bits per symbol {coded} not divisible for rate {num}/{den}"
            )));
        }
        Ok(coded * num / den)
    }

    /// Payload bits per packet: `D * data_bits_per_symbol - 6` tail bits.
    pub fn payload_bits(&self, mcs: &McsProfile) -> Result<usize, OfdmError> {
        Ok(self.data_symbols * self.data_bits_per_symbol(mcs)? - TAIL_BITS)
    }

    pub fn interleaver(&self, mcs: &McsProfile) -> Interleaver {
        Interleaver::for_symbol(self.data_subcarriers, mcs.bits_per_subcarrier())
    }

    pub fn validate(&self, mcs: &McsProfile) -> Result<(), OfdmError> {
        if !self.fft_size.is_power_of_two() {
            return Err(OfdmError::BadConfig(format!(
                "FFT size {} is not a power of two",
                self.fft_size
            )));
        }
        if self.data_subcarriers % 2 != 0 || self.data_subcarriers + 2 > self.fft_size {
            return Err(OfdmError::BadConfig(format!(
                "{} data subcarriers do not fit a {}-point grid",
                self.data_subcarriers, self.fft_size
            )));
        }
        if self.data_symbols == 0 {
            return Err(OfdmError::BadConfig("need at least one data symbol".into()));
        }
        let n = self.payload_bits(mcs)?;
        // Puncture arithmetic must tile the packet exactly.
        let kept = crate::fec::punctured_len(2 * (n + TAIL_BITS), mcs.rate);
        let need = self.data_symbols * self.coded_bits_per_symbol(mcs);
        if kept != need {
            return Err(OfdmError::BadConfig(format!(
                "punctured stream {kept} != {need} carried bits"
            )));
        }
        Ok(())
    }
}

/// Known full-band BPSK pilot: a fixed pseudo-random sign per subcarrier.
pub fn pilot_reference(fft_size: usize) -> Vec<Complex64> {
    (0..fft_size)
        .map(|k| {
            let sign = if splitmix64(0x7069_6c6f ^ k as u64) & 1 == 0 {
                1.0
            } else {
                -1.0
            };
            Complex64::new(sign, 0.0)
        })
        .collect()
}

/// Per-sample noise variance hitting a target SNR, where SNR is the mean
/// post-FFT data-bin signal power over the post-FFT noise power (`K σ²`).
pub fn noise_variance_for_snr(mean_bin_power: f64, fft_size: usize, snr_db: f64) -> f64 {
    mean_bin_power / (fft_size as f64 * 10f64.powf(snr_db / 10.0))
}

// ---------------------------------------------------------------------------
// LS estimation and ZF equalization
// ---------------------------------------------------------------------------

/// Per-subcarrier channel estimate; filled once per packet from the pilot.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizerState {
    h_hat: Vec<Complex64>,
}

impl EqualizerState {
    pub fn h_hat(&self) -> &[Complex64] {
        &self.h_hat
    }
}

/// Least-squares estimate `H_hat_k = Y_k / X_k` from the received pilot.
pub fn estimate_channel_ls(
    rx_pilot: &[Complex64],
    known_pilot: &[Complex64],
) -> Result<EqualizerState, OfdmError> {
    assert_eq!(rx_pilot.len(), known_pilot.len());
    if known_pilot.iter().any(|x| x.norm() == 0.0) {
        return Err(OfdmError::ZeroPilot);
    }
    Ok(EqualizerState {
        h_hat: rx_pilot
            .iter()
            .zip(known_pilot)
            .map(|(y, x)| y / x)
            .collect(),
    })
}

/// Magnitude below which a bin is treated as unequalizable.
pub const ZF_ERASURE_THRESHOLD: f64 = 1e-12;

/// One zero-forced bin: the equalized value, or an erasure where the
/// estimate is singular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualizedBin {
    pub value: Complex64,
    pub erased: bool,
}

/// Zero-forcing equalization `X_hat_k = Y_k / H_hat_k` over one symbol.
/// `bins` selects which subcarriers to equalize (indices into the grid).
pub fn equalize_zf(
    rx_grid: &[Complex64],
    eq: &EqualizerState,
    bins: &[usize],
) -> Vec<EqualizedBin> {
    bins.iter()
        .map(|&k| {
            let h = eq.h_hat[k];
            if h.norm() < ZF_ERASURE_THRESHOLD {
                EqualizedBin {
                    value: Complex64::new(0.0, 0.0),
                    erased: true,
                }
            } else {
                EqualizedBin {
                    value: rx_grid[k] / h,
                    erased: false,
                }
            }
        })
        .collect()
}
