//! Rate puncturing over the interleaved (A, B) encoder output stream.
//!
//! Positions are matched to the pattern by index modulo the pattern length,
//! so partial trailing periods are handled consistently on both sides.

use super::{CodeRate, FecError};

/// Number of bits that survive puncturing a `coded_len`-bit stream.
pub fn punctured_len(coded_len: usize, rate: CodeRate) -> usize {
    let pattern = rate.puncture_pattern();
    (0..coded_len).filter(|i| pattern[i % pattern.len()]).count()
}

/// Removes coded bits according to the rate's puncturing pattern.
pub fn puncture(coded: &[bool], rate: CodeRate) -> Vec<bool> {
    let pattern = rate.puncture_pattern();
    coded
        .iter()
        .enumerate()
        .filter(|(i, _)| pattern[i % pattern.len()])
        .map(|(_, &b)| b)
        .collect()
}

/// Restores punctured positions as erasures (`None`).
///
/// `coded_len` is the pre-puncture stream length; the input length must
/// match the pattern arithmetic for it.
pub fn depuncture(
    kept: &[Option<bool>],
    rate: CodeRate,
    coded_len: usize,
) -> Result<Vec<Option<bool>>, FecError> {
    let expected = punctured_len(coded_len, rate);
    if kept.len() != expected {
        return Err(FecError::PunctureLength {
            got: kept.len(),
            expected,
        });
    }
    let pattern = rate.puncture_pattern();
    let mut out = Vec::with_capacity(coded_len);
    let mut src = kept.iter();
    for i in 0..coded_len {
        if pattern[i % pattern.len()] {
            out.push(*src.next().expect("length checked above"));
        } else {
            out.push(None);
        }
    }
    Ok(out)
}

/// [`depuncture`] for hard bits with no upstream erasures.
pub fn depuncture_hard(
    kept: &[bool],
    rate: CodeRate,
    coded_len: usize,
) -> Result<Vec<Option<bool>>, FecError> {
    let soft: Vec<Option<bool>> = kept.iter().map(|&b| Some(b)).collect();
    depuncture(&soft, rate, coded_len)
}
