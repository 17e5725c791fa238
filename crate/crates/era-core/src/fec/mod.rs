//! Channel coding chain: constraint-length-7 convolutional code (generators
//! 133/171 octal), rate puncturing, per-symbol block interleaving, and a
//! hard-decision Viterbi decoder with erasure support.
//!
//! Punctured positions re-enter the decoder as erasures that contribute no
//! branch metric. Encoder blocks are terminated with six zero tail bits so
//! the trellis starts and ends in the zero state.

mod conv;
mod interleave;
mod puncture;

pub use conv::{conv_encode, viterbi_decode, TAIL_BITS};
pub use interleave::Interleaver;
pub use puncture::{depuncture, depuncture_hard, puncture, punctured_len};

use thiserror::Error;

/// Code rate of the punctured convolutional code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CodeRate {
    Half,
    TwoThirds,
    ThreeQuarters,
    FiveSixths,
}

impl CodeRate {
    /// Numerator/denominator of the rate.
    pub fn fraction(self) -> (usize, usize) {
        match self {
            CodeRate::Half => (1, 2),
            CodeRate::TwoThirds => (2, 3),
            CodeRate::ThreeQuarters => (3, 4),
            CodeRate::FiveSixths => (5, 6),
        }
    }

    pub fn as_f64(self) -> f64 {
        let (n, d) = self.fraction();
        n as f64 / d as f64
    }

    /// Puncturing pattern over interleaved (A, B) output pairs.
    ///
    /// The pattern repeats every `2 * period` coded bits where `period` is
    /// the number of information bits it spans (1, 2, 3, 5).
    pub fn puncture_pattern(self) -> &'static [bool] {
        match self {
            // A: 1, B: 1
            CodeRate::Half => &[true, true],
            // A: 1 1, B: 1 0
            CodeRate::TwoThirds => &[true, true, true, false],
            // A: 1 1 0, B: 1 0 1
            CodeRate::ThreeQuarters => &[true, true, true, false, false, true],
            // A: 1 1 0 1 0, B: 1 0 1 0 1
            CodeRate::FiveSixths => &[
                true, true, true, false, false, true, true, false, false, true,
            ],
        }
    }
}

/// Convolutional code configuration: K=7, generators 133/171 octal, plus the
/// puncturing rate.
#[derive(Debug, Clone, Copy)]
pub struct CodeConfig {
    pub rate: CodeRate,
}

impl CodeConfig {
    pub fn new(rate: CodeRate) -> Self {
        Self { rate }
    }
}

/// Errors from the coding chain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FecError {
    #[error("bit stream length {got} does not match interleaver block of {expected}")]
    BlockSize { got: usize, expected: usize },
    #[error("punctured stream length {got} does not fit pattern arithmetic for {expected}")]
    PunctureLength { got: usize, expected: usize },
}
