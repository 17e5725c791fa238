//! Packet construction and reception.

use num_complex::Complex64;

use crate::dsp::{fft, ifft, map_bits, Constellation};
use crate::fec::{conv_encode, depuncture, viterbi_decode, CodeConfig, TAIL_BITS};

use super::{
    equalize_zf, estimate_channel_ls, pilot_reference, McsProfile, OfdmConfig, OfdmError,
};

/// One built packet: payload, frequency-domain grids (pilot first), and the
/// transmitted sample stream.
#[derive(Debug, Clone)]
pub struct OfdmPacket {
    pub payload: Vec<bool>,
    /// `1 + D` grids of `fft_size` bins each; index 0 is the pilot.
    pub grids: Vec<Vec<Complex64>>,
    pub samples: Vec<Complex64>,
    /// Packet duration in seconds.
    pub duration: f64,
    /// Symbol duration (CP included) in seconds.
    pub symbol_duration: f64,
}

/// Receiver output for one packet.
#[derive(Debug, Clone)]
pub struct RxReport {
    pub payload: Vec<bool>,
    /// Genie comparison against the transmitted payload.
    pub packet_ok: bool,
    /// RMS error-vector magnitude per data symbol, against the transmitted
    /// grid.
    pub evm_per_symbol: Vec<f64>,
}

/// Encodes, interleaves, maps, and modulates a payload into a packet.
pub fn build_packet(
    payload: &[bool],
    mcs: &McsProfile,
    cfg: &OfdmConfig,
) -> Result<OfdmPacket, OfdmError> {
    cfg.validate(mcs)?;
    let expected = cfg.payload_bits(mcs)?;
    if payload.len() != expected {
        return Err(OfdmError::PayloadSize {
            got: payload.len(),
            expected,
        });
    }

    let code = CodeConfig::new(mcs.rate);
    let coded = conv_encode(payload, &code);
    let ncbps = cfg.coded_bits_per_symbol(mcs);
    debug_assert_eq!(coded.len(), cfg.data_symbols * ncbps);

    let constellation = Constellation::new(mcs.order)?;
    let il = cfg.interleaver(mcs);
    let bins = cfg.data_bins();

    let mut grids = Vec::with_capacity(1 + cfg.data_symbols);
    grids.push(pilot_reference(cfg.fft_size));
    for block in coded.chunks(ncbps) {
        let interleaved = il.interleave(block)?;
        let symbols = map_bits(&interleaved, &constellation)?;
        let mut grid = vec![Complex64::new(0.0, 0.0); cfg.fft_size];
        for (&bin, &s) in bins.iter().zip(&symbols) {
            grid[bin] = s;
        }
        grids.push(grid);
    }

    let mut samples = Vec::with_capacity(cfg.packet_samples());
    for grid in &grids {
        let time = ifft(grid)?;
        samples.extend_from_slice(&time[cfg.fft_size - cfg.cp_len..]);
        samples.extend_from_slice(&time);
    }

    Ok(OfdmPacket {
        payload: payload.to_vec(),
        grids,
        samples,
        duration: cfg.packet_duration(),
        symbol_duration: cfg.symbol_duration(),
    })
}

/// Demodulates and decodes a received sample stream, adjudicating against
/// the transmitted packet (genie comparison).
pub fn receive_packet(
    rx_samples: &[Complex64],
    cfg: &OfdmConfig,
    mcs: &McsProfile,
    tx: &OfdmPacket,
) -> Result<RxReport, OfdmError> {
    if rx_samples.len() != cfg.packet_samples() {
        return Err(OfdmError::SampleCount {
            got: rx_samples.len(),
            expected: cfg.packet_samples(),
        });
    }

    let sym_len = cfg.symbol_len();
    let window = |n: usize| {
        let start = n * sym_len + cfg.cp_len;
        &rx_samples[start..start + cfg.fft_size]
    };

    // Pilot symbol -> LS estimate, fixed for the rest of the packet.
    let pilot_grid = fft(window(0))?;
    let eq = estimate_channel_ls(&pilot_grid, &tx.grids[0])?;

    let constellation = Constellation::new(mcs.order)?;
    let il = cfg.interleaver(mcs);
    let bins = cfg.data_bins();
    let ncbps = cfg.coded_bits_per_symbol(mcs);

    let mut coded: Vec<Option<bool>> = Vec::with_capacity(cfg.data_symbols * ncbps);
    let mut evm_per_symbol = Vec::with_capacity(cfg.data_symbols);
    let mut bit_buf: Vec<bool> = Vec::with_capacity(mcs.bits_per_subcarrier());

    for n in 0..cfg.data_symbols {
        let rx_grid = fft(window(1 + n))?;
        let equalized = equalize_zf(&rx_grid, &eq, &bins);

        // EVM against the transmitted grid.
        let tx_grid = &tx.grids[1 + n];
        let mut err_power = 0.0;
        for (bin, e) in bins.iter().zip(&equalized) {
            err_power += (e.value - tx_grid[*bin]).norm_sqr();
        }
        evm_per_symbol.push((err_power / bins.len() as f64).sqrt());

        // Hard decisions with erasure pass-through, then deinterleave.
        let mut symbol_bits: Vec<Option<bool>> = Vec::with_capacity(ncbps);
        for e in &equalized {
            if e.erased {
                for _ in 0..mcs.bits_per_subcarrier() {
                    symbol_bits.push(None);
                }
            } else {
                bit_buf.clear();
                constellation.demap_symbol(e.value, &mut bit_buf);
                symbol_bits.extend(bit_buf.iter().map(|&b| Some(b)));
            }
        }
        coded.extend(il.deinterleave(&symbol_bits)?);
    }

    let n_info = cfg.payload_bits(mcs)?;
    let soft = depuncture(&coded, mcs.rate, 2 * (n_info + TAIL_BITS))?;
    let payload = viterbi_decode(&soft, &CodeConfig::new(mcs.rate));
    let packet_ok = payload == tx.payload;

    Ok(RxReport {
        payload,
        packet_ok,
        evm_per_symbol,
    })
}
