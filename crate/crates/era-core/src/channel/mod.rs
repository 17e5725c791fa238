//! Channel realization and link budget.
//!
//! The link between the legitimate parties is a static tapped-delay-line
//! channel plus one switchable tap controlled by the attacker's surface.
//! Each surface element contributes an amplitude/phase cascade; flipping an
//! element's state flips the sign of its contribution. The aggregate element
//! sum is folded onto a single tap of the impulse response, which is how the
//! time-domain simulation realizes the per-subcarrier model
//! `H_k = sum_i q_{i,k} r_i + d_k`.
//!
//! ## Two views of the surface
//!
//! - [`EraChannel::subcarrier_response`] evaluates the per-subcarrier model
//!   directly, including each element's sub-tap delay dispersion. This is
//!   what a CSI probe of the true channel reports.
//! - [`EraChannel::cir_at_sample`] / [`EraChannel::apply`] realize the
//!   single-tap fold in the time domain. With zero element dispersion
//!   (the default) both views agree exactly.

mod link_budget;

pub use link_budget::{
    direct_path_gain, irs_path_gain, jsr_from_geometry, required_surface_area, LinkGeometry,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::attacker::{AttackError, IrsConfiguration, IrsSchedule, ProbeOracle};
use crate::dsp::{awgn, fft, DspError, RngStream};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("pattern has {got} elements, channel expects {expected}")]
    PatternLength { got: usize, expected: usize },
    #[error("direct channel has zero power; JSR is undefined")]
    ZeroDirectPower,
    #[error("all-ones reference gain is zero; cannot calibrate")]
    DegenerateReference,
    #[error("distance and frequency values must be positive (got {0})")]
    NonPositiveGeometry(f64),
    #[error("linear JSR must be non-negative (got {0})")]
    NegativeJsr(f64),
    #[error(transparent)]
    Dsp(#[from] DspError),
}

// ---------------------------------------------------------------------------
// Impulse response
// ---------------------------------------------------------------------------

/// Channel impulse response: complex tap gains at sample spacing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cir {
    pub taps: Vec<Complex64>,
}

impl Cir {
    pub fn new(taps: Vec<Complex64>) -> Self {
        assert!(!taps.is_empty(), "a CIR needs at least one tap");
        Self { taps }
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn power(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }

    /// K-point frequency response (zero-padded unnormalized DFT of the taps).
    pub fn frequency_response(&self, k: usize) -> Result<Vec<Complex64>, ChannelError> {
        let mut padded = vec![Complex64::new(0.0, 0.0); k];
        for (l, &tap) in self.taps.iter().enumerate() {
            padded[l] = tap;
        }
        Ok(fft(&padded)?)
    }
}

/// Time-varying convolution `y[t] = sum_l h_l[t] x[t-l]` with one CIR per
/// output sample. Reference path for cross-checking the fast fold in
/// [`EraChannel::apply`] and the interference-matrix analysis.
pub fn convolve_time_varying(samples: &[Complex64], cirs: &[Cir]) -> Vec<Complex64> {
    assert_eq!(samples.len(), cirs.len());
    let mut out = Vec::with_capacity(samples.len());
    for (t, cir) in cirs.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (l, &h) in cir.taps.iter().enumerate() {
            if t >= l {
                acc += h * samples[t - l];
            }
        }
        out.push(acc);
    }
    out
}

// ---------------------------------------------------------------------------
// Surface element paths
// ---------------------------------------------------------------------------

/// Cascade path through one surface element.
///
/// The element's full path delay splits into the carrier-scale part, which
/// appears as the static `phase`, and `dispersion`, the sub-tap remainder in
/// samples that makes the element's subcarrier response frequency-selective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsElement {
    pub amplitude: f64,
    pub phase: f64,
    #[serde(default)]
    pub dispersion: f64,
}

impl IrsElement {
    /// Complex gain folded onto the surface tap (dispersion dropped).
    pub fn folded_gain(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

// ---------------------------------------------------------------------------
// The composite channel
// ---------------------------------------------------------------------------

/// Parameters for drawing a random channel realization.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelRealizationConfig {
    /// FFT size / number of subcarriers the realization is evaluated on.
    pub fft_size: usize,
    /// Direct-path taps.
    #[serde(default = "default_taps")]
    pub taps: usize,
    /// Power decay per tap, dB.
    #[serde(default = "default_decay")]
    pub tap_decay_db: f64,
    /// Surface elements.
    pub n_elements: usize,
    /// CIR tap index carrying the surface contribution.
    #[serde(default)]
    pub irs_tap: usize,
    /// Maximum per-element sub-tap delay spread, in samples.
    #[serde(default)]
    pub element_dispersion: f64,
}

fn default_taps() -> usize {
    6
}

fn default_decay() -> f64 {
    3.0
}

impl ChannelRealizationConfig {
    pub fn new(fft_size: usize, n_elements: usize) -> Self {
        Self {
            fft_size,
            taps: default_taps(),
            tap_decay_db: default_decay(),
            n_elements,
            irs_tap: 0,
            element_dispersion: 0.0,
        }
    }
}

/// Static direct channel plus the attacker's switchable tap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EraChannel {
    /// Subcarrier count the realization is evaluated on.
    pub fft_size: usize,
    pub direct: Cir,
    /// CIR tap index `l` carrying the surface contribution.
    pub irs_tap: usize,
    pub elements: Vec<IrsElement>,
    /// Amplitude scale applied to the surface contribution; set by
    /// [`EraChannel::calibrated_to_jsr`].
    pub irs_scale: f64,
    /// Seed the realization was drawn from, if any.
    pub seed: Option<u64>,
}

impl EraChannel {
    pub fn new(fft_size: usize, direct: Cir, irs_tap: usize, elements: Vec<IrsElement>) -> Self {
        assert!(irs_tap < direct.len(), "surface tap index out of range");
        assert!(!elements.is_empty(), "need at least one surface element");
        assert!(fft_size.is_power_of_two());
        Self {
            fft_size,
            direct,
            irs_tap,
            elements,
            irs_scale: 1.0,
            seed: None,
        }
    }

    /// Draws a seed-reproducible realization: exponentially decaying
    /// complex-Gaussian direct taps normalized to unit total power, and
    /// elements with unit amplitude, uniform phase, and uniform sub-tap
    /// dispersion in `[0, element_dispersion)`.
    pub fn randomized(cfg: &ChannelRealizationConfig, seed: u64) -> Self {
        let mut rng = RngStream::from_path(seed, &[0x6368616e]);
        let mut taps = Vec::with_capacity(cfg.taps);
        for l in 0..cfg.taps {
            let p = 10f64.powf(-cfg.tap_decay_db * l as f64 / 10.0);
            taps.push(rng.next_cn(p));
        }
        let power: f64 = taps.iter().map(|t| t.norm_sqr()).sum();
        let norm = 1.0 / power.sqrt();
        for t in &mut taps {
            *t *= norm;
        }

        let elements = (0..cfg.n_elements)
            .map(|_| IrsElement {
                amplitude: 1.0,
                phase: rng.next_phase(),
                dispersion: rng.next_f64() * cfg.element_dispersion,
            })
            .collect();

        let mut ch = Self::new(cfg.fft_size, Cir::new(taps), cfg.irs_tap, elements);
        ch.seed = Some(seed);
        ch
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Total direct-path power `sum_l |h_l|^2`, which equals the mean
    /// per-subcarrier direct power `(1/K) sum_k |d_k|^2`.
    pub fn direct_power(&self) -> f64 {
        self.direct.power()
    }

    /// Per-subcarrier direct gains `d_k`.
    pub fn direct_response(&self) -> Result<Vec<Complex64>, ChannelError> {
        self.direct.frequency_response(self.fft_size)
    }

    fn check_pattern(&self, pattern: &IrsConfiguration) -> Result<(), ChannelError> {
        if pattern.len() != self.elements.len() {
            return Err(ChannelError::PatternLength {
                got: pattern.len(),
                expected: self.elements.len(),
            });
        }
        Ok(())
    }

    /// Element cascade gain `q_{i,k}` (unscaled), including the surface
    /// tap's delay phase and the element's dispersion.
    pub fn element_response(&self, i: usize, k: usize) -> Complex64 {
        let k_total = self.fft_size as f64;
        let e = &self.elements[i];
        // Signed frequency index for the sub-tap dispersion term.
        let nu = if k < self.fft_size / 2 {
            k as f64
        } else {
            k as f64 - k_total
        };
        let tap_phase = -2.0 * std::f64::consts::PI * (k * self.irs_tap) as f64 / k_total;
        let disp_phase = -2.0 * std::f64::consts::PI * nu * e.dispersion / k_total;
        Complex64::from_polar(e.amplitude, e.phase + tap_phase + disp_phase)
    }

    /// Surface-only per-subcarrier response `irs_scale * sum_i q_{i,k} r_i`.
    pub fn irs_subcarrier_response(
        &self,
        pattern: &IrsConfiguration,
    ) -> Result<Vec<Complex64>, ChannelError> {
        self.check_pattern(pattern)?;
        let mut out = Vec::with_capacity(self.fft_size);
        for k in 0..self.fft_size {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..self.elements.len() {
                acc += self.element_response(i, k) * pattern.reflection(i);
            }
            out.push(acc * self.irs_scale);
        }
        Ok(out)
    }

    /// Effective per-subcarrier channel `H_k = irs + d_k`.
    pub fn subcarrier_response(
        &self,
        pattern: &IrsConfiguration,
    ) -> Result<Vec<Complex64>, ChannelError> {
        let mut irs = self.irs_subcarrier_response(pattern)?;
        let direct = self.direct_response()?;
        for (h, d) in irs.iter_mut().zip(&direct) {
            *h += d;
        }
        Ok(irs)
    }

    /// Aggregate element sum folded onto the surface tap, scaled.
    pub fn folded_irs_gain(&self, pattern: &IrsConfiguration) -> Result<Complex64, ChannelError> {
        self.check_pattern(pattern)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, e) in self.elements.iter().enumerate() {
            acc += e.folded_gain() * pattern.reflection(i);
        }
        Ok(acc * self.irs_scale)
    }

    /// Surface power of the static all-ones reference pattern,
    /// `P_IRS = |irs_scale * sum_i g_i|^2`.
    pub fn irs_reference_power(&self) -> Result<f64, ChannelError> {
        let ones = IrsConfiguration::all_ones(self.elements.len());
        Ok(self.folded_irs_gain(&ones)?.norm_sqr())
    }

    /// Instantaneous CIR at sample `m`: direct taps with the active
    /// pattern's folded gain added on the surface tap.
    pub fn cir_at_sample(
        &self,
        sched: &IrsSchedule,
        sample_rate: f64,
        m: u64,
    ) -> Result<Cir, ChannelError> {
        let t = m as f64 / sample_rate;
        let gain = self.folded_irs_gain(sched.active_at(t))?;
        let mut taps = self.direct.taps.clone();
        taps[self.irs_tap] += gain;
        Ok(Cir::new(taps))
    }

    /// Passes `samples` through the time-varying channel and adds AWGN of
    /// per-sample variance `noise_var`. Deterministic given the RNG stream.
    pub fn apply(
        &self,
        samples: &[Complex64],
        sched: &IrsSchedule,
        sample_rate: f64,
        noise_var: f64,
        rng: &mut RngStream,
    ) -> Result<Vec<Complex64>, ChannelError> {
        let gain0 = self.folded_irs_gain(&sched.pattern0)?;
        let gain1 = self.folded_irs_gain(&sched.pattern1)?;
        let mut taps0 = self.direct.taps.clone();
        taps0[self.irs_tap] += gain0;
        let mut taps1 = self.direct.taps.clone();
        taps1[self.irs_tap] += gain1;

        let l = self.direct.len();
        let mut out = Vec::with_capacity(samples.len());
        for t in 0..samples.len() {
            let active0 = sched.pattern0_active_at(t as f64 / sample_rate);
            let taps = if active0 { &taps0 } else { &taps1 };
            let mut acc = Complex64::new(0.0, 0.0);
            let lo = t.saturating_sub(l - 1);
            for src in lo..=t {
                acc += taps[t - src] * samples[src];
            }
            out.push(acc);
        }
        Ok(awgn(&out, noise_var, rng)?)
    }

    /// Returns a copy with `irs_scale` set so the all-ones surface power
    /// over the total direct power hits `target_jsr_db`.
    pub fn calibrated_to_jsr(&self, target_jsr_db: f64) -> Result<Self, ChannelError> {
        let direct_power = self.direct_power();
        if direct_power <= 0.0 {
            return Err(ChannelError::ZeroDirectPower);
        }
        let ones = IrsConfiguration::all_ones(self.elements.len());
        let mut unit = self.clone();
        unit.irs_scale = 1.0;
        let reference = unit.folded_irs_gain(&ones)?.norm();
        if reference <= 0.0 {
            return Err(ChannelError::DegenerateReference);
        }
        let target = 10f64.powf(target_jsr_db / 10.0);
        let mut out = self.clone();
        out.irs_scale = (target * direct_power).sqrt() / reference;
        Ok(out)
    }

    /// Re-measures the calibrated ratio, in dB.
    pub fn measured_jsr_db(&self) -> Result<f64, ChannelError> {
        let direct_power = self.direct_power();
        if direct_power <= 0.0 {
            return Err(ChannelError::ZeroDirectPower);
        }
        Ok(10.0 * (self.irs_reference_power()? / direct_power).log10())
    }

    /// Serializes the realization as structured text.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("channel serializes")
    }

    pub fn from_toml(s: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(s)
    }
}

// ---------------------------------------------------------------------------
// CSI probe
// ---------------------------------------------------------------------------

/// Magnitude-CSI probe over an [`EraChannel`], optionally noisy.
///
/// In noiseless mode the probe is deterministic per configuration.
pub struct MagnitudeProbe<'a> {
    channel: &'a EraChannel,
    noise: Option<(f64, RngStream)>,
}

impl<'a> MagnitudeProbe<'a> {
    pub fn noiseless(channel: &'a EraChannel) -> Self {
        Self {
            channel,
            noise: None,
        }
    }

    /// CSI estimates at the given probe SNR (per-subcarrier complex noise on
    /// `H_k` before taking magnitudes).
    pub fn noisy(channel: &'a EraChannel, snr_db: f64, rng: RngStream) -> Self {
        Self {
            channel,
            noise: Some((10f64.powf(snr_db / 10.0), rng)),
        }
    }
}

impl ProbeOracle for MagnitudeProbe<'_> {
    fn probe(&mut self, pattern: &IrsConfiguration) -> Result<Vec<f64>, AttackError> {
        let h = self
            .channel
            .subcarrier_response(pattern)
            .map_err(|e| AttackError::Probe(e.to_string()))?;
        match &mut self.noise {
            None => Ok(h.iter().map(|v| v.norm()).collect()),
            Some((snr, rng)) => {
                let mean: f64 =
                    h.iter().map(|v| v.norm_sqr()).sum::<f64>() / h.len() as f64;
                let var = mean / *snr;
                Ok(h.iter().map(|v| (v + rng.next_cn(var)).norm()).collect())
            }
        }
    }
}
