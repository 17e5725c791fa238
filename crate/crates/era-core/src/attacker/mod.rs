//! The adversary's side of the link: binary surface patterns, the toggle
//! schedule that flips the channel between two states, and the greedy
//! pattern optimizer working from magnitude CSI probes.

mod optimizer;

pub use optimizer::{
    csi_distance, optimize_patterns, OptimizeOutcome, OptimizerSettings, ProbeOracle,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsp::RngStream;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error("pattern has {got} elements, expected {expected}")]
    PatternLength { got: usize, expected: usize },
    #[error("invalid pattern hex string: {0}")]
    BadHex(String),
    #[error("CSI vectors have different lengths ({0} vs {1})")]
    CsiLength(usize, usize),
    #[error("probe failed: {0}")]
    Probe(String),
}

// ---------------------------------------------------------------------------
// Surface patterns
// ---------------------------------------------------------------------------

/// One binary surface pattern: element `i` in state '0' or '1', mapping to
/// reflection coefficients -1 / +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrsConfiguration {
    bits: Vec<bool>,
}

impl IrsConfiguration {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn all_zeros(n: usize) -> Self {
        Self { bits: vec![false; n] }
    }

    pub fn all_ones(n: usize) -> Self {
        Self { bits: vec![true; n] }
    }

    pub fn random(n: usize, rng: &mut RngStream) -> Self {
        Self { bits: rng.bits(n) }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    /// Reflection coefficient of element `i`: state '1' -> +1, '0' -> -1.
    pub fn reflection(&self, i: usize) -> f64 {
        if self.bits[i] {
            1.0
        } else {
            -1.0
        }
    }

    /// Element-wise inverted pattern (sign flip of every coefficient).
    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Hex export, most significant bit of the first nibble = element 0.
    /// Trailing pad bits of the last nibble are zero.
    pub fn to_hex(&self) -> String {
        let nibbles = self.bits.len().div_ceil(4);
        let mut s = String::with_capacity(2 + nibbles);
        s.push_str("0x");
        for n in 0..nibbles {
            let mut v = 0u8;
            for b in 0..4 {
                let idx = n * 4 + b;
                let bit = idx < self.bits.len() && self.bits[idx];
                v = (v << 1) | bit as u8;
            }
            s.push(char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase());
        }
        s
    }

    /// Parses the hex export format back into an `n`-element pattern.
    pub fn from_hex(s: &str, n: usize) -> Result<Self, AttackError> {
        let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
        let expected = n.div_ceil(4);
        if digits.len() != expected {
            return Err(AttackError::BadHex(format!(
                "{s}: expected {expected} hex digits for {n} elements"
            )));
        }
        let mut bits = Vec::with_capacity(n);
        for (pos, ch) in digits.chars().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| AttackError::BadHex(format!("{s}: bad digit '{ch}'")))?
                as u8;
            for b in 0..4 {
                let idx = pos * 4 + b;
                let bit = v & (1 << (3 - b)) != 0;
                if idx < n {
                    bits.push(bit);
                } else if bit {
                    return Err(AttackError::BadHex(format!(
                        "{s}: nonzero pad bit past element {n}"
                    )));
                }
            }
        }
        Ok(Self { bits })
    }
}

// ---------------------------------------------------------------------------
// Toggle schedule
// ---------------------------------------------------------------------------

/// Square-wave toggling between two patterns at 50% duty.
///
/// The active pattern at time `t` is `pattern0` iff
/// `frac((t + offset) / T) < 1/2` with `T = 1/f_irs`. A modulation frequency
/// of zero means the surface stays on `pattern0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsSchedule {
    pub pattern0: IrsConfiguration,
    pub pattern1: IrsConfiguration,
    pub f_irs_hz: f64,
    pub phase_offset_s: f64,
}

impl IrsSchedule {
    pub fn new(pattern0: IrsConfiguration, pattern1: IrsConfiguration, f_irs_hz: f64) -> Self {
        assert_eq!(pattern0.len(), pattern1.len());
        assert!(f_irs_hz >= 0.0);
        Self {
            pattern0,
            pattern1,
            f_irs_hz,
            phase_offset_s: 0.0,
        }
    }

    /// All elements '0' toggled against all elements '1'.
    pub fn all_zero_one(n: usize, f_irs_hz: f64) -> Self {
        Self::new(
            IrsConfiguration::all_zeros(n),
            IrsConfiguration::all_ones(n),
            f_irs_hz,
        )
    }

    /// A surface frozen on one pattern.
    pub fn static_pattern(pattern: IrsConfiguration) -> Self {
        Self::new(pattern.clone(), pattern, 0.0)
    }

    pub fn with_offset(mut self, offset_s: f64) -> Self {
        self.phase_offset_s = offset_s;
        self
    }

    /// Toggle period `T = 1/f`; infinite for a static schedule.
    pub fn period(&self) -> f64 {
        if self.f_irs_hz == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.f_irs_hz
        }
    }

    /// How long one pattern is held before the surface switches (half the
    /// toggle period at 50% duty). This is the duration the packet-error
    /// bound compares against the packet length.
    pub fn pattern_hold(&self) -> f64 {
        self.period() / 2.0
    }

    pub fn is_static(&self) -> bool {
        self.f_irs_hz == 0.0 || self.pattern0 == self.pattern1
    }

    /// Pattern active at time `t` (seconds).
    pub fn active_at(&self, t: f64) -> &IrsConfiguration {
        if self.f_irs_hz == 0.0 {
            return &self.pattern0;
        }
        let phase = (t + self.phase_offset_s) * self.f_irs_hz;
        let frac = phase - phase.floor();
        if frac < 0.5 {
            &self.pattern0
        } else {
            &self.pattern1
        }
    }

    /// True when `pattern0` is active at `t`; avoids borrowing the pattern.
    pub fn pattern0_active_at(&self, t: f64) -> bool {
        std::ptr::eq(self.active_at(t), &self.pattern0)
    }

    /// Switch instants within `[t0, t1)`, spaced exactly `T/2` apart.
    pub fn switch_instants(&self, t0: f64, t1: f64) -> Vec<f64> {
        if self.f_irs_hz == 0.0 {
            return Vec::new();
        }
        let half = self.period() / 2.0;
        let mut out = Vec::new();
        let mut m = ((t0 + self.phase_offset_s) / half).ceil();
        loop {
            let t = m * half - self.phase_offset_s;
            if t >= t1 {
                break;
            }
            if t >= t0 {
                out.push(t);
            }
            m += 1.0;
        }
        out
    }
}
