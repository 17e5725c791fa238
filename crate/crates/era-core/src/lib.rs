//! Baseband simulation and analysis library for jamming OFDM links with a
//! rapidly reconfigured reflecting surface.
//!
//! The library is organized around the attack pipeline:
//!
//! - [`dsp`] — FFT/IFFT, Gray constellations, seeded RNG streams, AWGN.
//! - [`fec`] — convolutional coding, puncturing, interleaving, Viterbi.
//! - [`channel`] — tapped-delay-line channels with a switchable surface tap,
//!   jamming-power calibration, and free-space link-budget math.
//! - [`ofdm`] — packet construction, LS estimation, zero-forcing reception.
//! - [`attacker`] — surface patterns, toggle schedules, and the greedy binary
//!   pattern optimizer.
//! - [`analysis`] — closed-form predictions: symbol-error formulas, the
//!   intercarrier-interference matrix, SIR reports, and the packet-error
//!   bound.

pub mod analysis;
pub mod attacker;
pub mod channel;
pub mod dsp;
pub mod fec;
pub mod ofdm;
