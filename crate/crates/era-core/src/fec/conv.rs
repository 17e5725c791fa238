//! K=7 convolutional encoder and hard-decision Viterbi decoder.

use super::{puncture, CodeConfig};

/// Zero tail bits appended to terminate the trellis.
pub const TAIL_BITS: usize = 6;

/// Generator 133 (octal), newest input at the MSB of the 7-bit window.
const POLY_A: u8 = 0o133;
/// Generator 171 (octal).
const POLY_B: u8 = 0o171;

const STATES: usize = 64;

#[inline]
fn parity(x: u8) -> bool {
    x.count_ones() & 1 == 1
}

#[inline]
fn branch_outputs(window: u8) -> (bool, bool) {
    (parity(window & POLY_A), parity(window & POLY_B))
}

/// Encodes `info`, appends six zero tail bits, and punctures the interleaved
/// (A, B) output per `cfg.rate`. Pre-puncture length is `2 * (n + 6)`.
pub fn conv_encode(info: &[bool], cfg: &CodeConfig) -> Vec<bool> {
    let mut window: u8 = 0;
    let mut coded = Vec::with_capacity(2 * (info.len() + TAIL_BITS));
    for &bit in info.iter().chain(std::iter::repeat(&false).take(TAIL_BITS)) {
        window = (window >> 1) | ((bit as u8) << 6);
        let (a, b) = branch_outputs(window);
        coded.push(a);
        coded.push(b);
    }
    puncture(&coded, cfg.rate)
}

/// Maximum-likelihood decoding under the Hamming metric over a terminated
/// trellis. Erasures (`None`) contribute zero branch metric. Input must be
/// the depunctured stream, length `2 * (n + 6)`.
pub fn viterbi_decode(coded: &[Option<bool>], _cfg: &CodeConfig) -> Vec<bool> {
    assert_eq!(coded.len() % 2, 0, "coded stream must be (A, B) pairs");
    let steps = coded.len() / 2;
    assert!(steps >= TAIL_BITS, "stream shorter than the tail");

    const INF: u32 = u32::MAX / 2;
    let mut metric = [INF; STATES];
    metric[0] = 0;
    let mut next = [INF; STATES];
    // Predecessor state (6 bits) and input bit (bit 6), per step and state.
    let mut back: Vec<[u8; STATES]> = vec![[0; STATES]; steps];

    for (step, pair) in coded.chunks_exact(2).enumerate() {
        // Cost of each (a, b) hypothesis against the observation.
        let mut cost = [0u32; 4];
        for (combo, c) in cost.iter_mut().enumerate() {
            let a = combo & 0b10 != 0;
            let b = combo & 0b01 != 0;
            if let Some(obs) = pair[0] {
                *c += (obs != a) as u32;
            }
            if let Some(obs) = pair[1] {
                *c += (obs != b) as u32;
            }
        }

        next.fill(INF);
        for state in 0..STATES {
            let base = metric[state];
            if base >= INF {
                continue;
            }
            for input in 0..2u8 {
                let window = (input << 6) | state as u8;
                let (a, b) = branch_outputs(window);
                let combo = ((a as usize) << 1) | b as usize;
                let candidate = base + cost[combo];
                let ns = (window >> 1) as usize;
                if candidate < next[ns] {
                    next[ns] = candidate;
                    back[step][ns] = (input << 6) | state as u8;
                }
            }
        }
        metric = next;
    }

    // Terminated trellis: trace back from state 0.
    let mut state = 0usize;
    let mut inputs = vec![false; steps];
    for step in (0..steps).rev() {
        let entry = back[step][state];
        inputs[step] = entry & 0x40 != 0;
        state = (entry & 0x3F) as usize;
    }
    inputs.truncate(steps - TAIL_BITS);
    inputs
}
