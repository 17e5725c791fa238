//! Experiment configuration: defaults, TOML loading, validation.
//!
//! Unknown keys are rejected so a typo'd config fails loudly instead of
//! silently running with defaults.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use era_core::channel::ChannelRealizationConfig;
use era_core::ofdm::{McsProfile, OfdmConfig};

use crate::HarnessError;

/// Channel-realization knobs exposed in the config file. The FFT size is
/// injected from the OFDM section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(default = "d_taps")]
    pub taps: usize,
    #[serde(default = "d_decay")]
    pub tap_decay_db: f64,
    #[serde(default = "d_elements")]
    pub n_elements: usize,
    #[serde(default)]
    pub irs_tap: usize,
    #[serde(default)]
    pub element_dispersion: f64,
}

fn d_taps() -> usize {
    6
}
fn d_decay() -> f64 {
    3.0
}
fn d_elements() -> usize {
    128
}

impl Default for ChannelSection {
    fn default() -> Self {
        Self {
            taps: d_taps(),
            tap_decay_db: d_decay(),
            n_elements: d_elements(),
            irs_tap: 0,
            element_dispersion: 0.0,
        }
    }
}

impl ChannelSection {
    pub fn realization(&self, fft_size: usize) -> ChannelRealizationConfig {
        ChannelRealizationConfig {
            fft_size,
            taps: self.taps,
            tap_decay_db: self.tap_decay_db,
            n_elements: self.n_elements,
            irs_tap: self.irs_tap,
            element_dispersion: self.element_dispersion,
        }
    }
}

/// Geometry sweep for the surface-size experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    /// Link distances to sweep, m.
    #[serde(default = "d_dab")]
    pub d_ab_m: Vec<f64>,
    /// Attacker distances, m (one output series per entry).
    #[serde(default = "d_dae")]
    pub d_ae_m: Vec<f64>,
    #[serde(default = "d_freq")]
    pub frequency_hz: f64,
    #[serde(default = "d_geo_jsr")]
    pub jsr_db: f64,
}

fn d_dab() -> Vec<f64> {
    (1..=30).map(|i| 2.0 * i as f64).collect()
}
fn d_dae() -> Vec<f64> {
    vec![1.0, 2.0, 10.0, 20.0]
}
fn d_freq() -> f64 {
    5.35e9
}
fn d_geo_jsr() -> f64 {
    -10.0
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            d_ab_m: d_dab(),
            d_ae_m: d_dae(),
            frequency_hz: d_freq(),
            jsr_db: d_geo_jsr(),
        }
    }
}

/// Optimizer-demo settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    #[serde(default = "d_rounds")]
    pub rounds: usize,
    /// Toggle frequency of the schedules in the paired PER comparison.
    #[serde(default = "d_opt_freq")]
    pub f_irs_hz: f64,
    /// JSR the paired comparison runs at.
    #[serde(default = "d_opt_jsr")]
    pub jsr_db: f64,
    /// MCS for the paired comparison (most robust by default).
    #[serde(default)]
    pub compare_mcs: u8,
    /// Probe SNR in dB; omit for noiseless probes.
    #[serde(default)]
    pub probe_snr_db: Option<f64>,
    /// Probe repetitions averaged per CSI reading.
    #[serde(default = "d_repeats")]
    pub probe_repeats: usize,
}

fn d_rounds() -> usize {
    2
}
fn d_opt_freq() -> f64 {
    30e3
}
fn d_opt_jsr() -> f64 {
    -5.0
}
fn d_repeats() -> usize {
    1
}

impl Default for OptimizerSection {
    fn default() -> Self {
        Self {
            rounds: d_rounds(),
            f_irs_hz: d_opt_freq(),
            jsr_db: d_opt_jsr(),
            compare_mcs: 0,
            probe_snr_db: None,
            probe_repeats: d_repeats(),
        }
    }
}

/// Full experiment description. `(config, master_seed)` determines every
/// output byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// MCS indices to sweep.
    #[serde(default = "d_mcs")]
    pub mcs: Vec<u8>,
    /// JSR grid in dB.
    #[serde(default = "d_jsr")]
    pub jsr_db: Vec<f64>,
    /// Surface modulation frequency grid in Hz.
    #[serde(default = "d_firs")]
    pub f_irs_hz: Vec<f64>,
    #[serde(default = "d_snr")]
    pub snr_db: f64,
    #[serde(default = "d_packets")]
    pub packets_per_point: usize,
    #[serde(default = "d_master")]
    pub master_seed: u64,
    #[serde(default = "d_chseed")]
    pub channel_seed: u64,
    #[serde(default = "d_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub ofdm: OfdmConfig,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
}

fn d_mcs() -> Vec<u8> {
    (0..8).collect()
}
fn d_jsr() -> Vec<f64> {
    vec![-25.0, -20.0, -15.0, -10.0, -5.0]
}
fn d_firs() -> Vec<f64> {
    vec![30e3]
}
fn d_snr() -> f64 {
    50.0
}
fn d_packets() -> usize {
    1000
}
fn d_master() -> u64 {
    1
}
fn d_chseed() -> u64 {
    7
}
fn d_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config uses defaults")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.packets_per_point == 0 {
            return Err(HarnessError::Config("packets_per_point must be >= 1".into()));
        }
        if self.mcs.is_empty() || self.jsr_db.is_empty() || self.f_irs_hz.is_empty() {
            return Err(HarnessError::Config("sweep grids must be non-empty".into()));
        }
        for &m in &self.mcs {
            let mcs = McsProfile::from_index(m)
                .ok_or_else(|| HarnessError::Config(format!("unknown MCS index {m}")))?;
            self.ofdm
                .validate(&mcs)
                .map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        if self.channel.n_elements == 0 {
            return Err(HarnessError::Config("channel.n_elements must be >= 1".into()));
        }
        Ok(())
    }
}
