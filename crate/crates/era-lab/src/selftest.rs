//! Runtime invariant suite behind the `selftest` subcommand.
//!
//! Each check re-derives a core invariant at desk scale and reports one
//! PASS/FAIL line. The output text is deterministic, which the
//! reproducibility checks rely on.

use num_complex::Complex64;

use era_core::analysis::per_upper_bound;
use era_core::attacker::{csi_distance, optimize_patterns, IrsConfiguration, OptimizerSettings};
use era_core::channel::{
    required_surface_area, ChannelRealizationConfig, EraChannel, LinkGeometry, MagnitudeProbe,
};
use era_core::dsp::{demap_bits, fft, ifft, map_bits, Constellation, RngStream};
use era_core::fec::{
    conv_encode, depuncture_hard, viterbi_decode, CodeConfig, CodeRate, Interleaver, TAIL_BITS,
};
use era_core::ofdm::{build_packet, receive_packet, McsProfile, OfdmConfig};

use crate::experiments::ici_equivalence_error;

type Check = (&'static str, fn() -> Result<(), String>);

fn fail(msg: String) -> Result<(), String> {
    Err(msg)
}

fn fft_roundtrip() -> Result<(), String> {
    let mut rng = RngStream::new(0xF00, 0);
    for exp in 1..=12 {
        let n = 1usize << exp;
        let x: Vec<Complex64> = (0..n).map(|_| rng.next_cn(1.0)).collect();
        let back = ifft(&fft(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let scale: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for (a, b) in x.iter().zip(&back) {
            if (a - b).norm() / scale >= 1e-10 {
                return fail(format!("roundtrip error at K={n}"));
            }
        }
    }
    Ok(())
}

fn parseval() -> Result<(), String> {
    let mut rng = RngStream::new(0xF01, 0);
    let x: Vec<Complex64> = (0..256).map(|_| rng.next_cn(1.0)).collect();
    let spec = fft(&x).map_err(|e| e.to_string())?;
    let t: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let f: f64 = spec.iter().map(|v| v.norm_sqr()).sum::<f64>() / 256.0;
    if (t - f).abs() > 1e-9 * t {
        return fail(format!("energy mismatch {t} vs {f}"));
    }
    Ok(())
}

fn constellations() -> Result<(), String> {
    for order in [2usize, 4, 16, 64] {
        let c = Constellation::new(order).map_err(|e| e.to_string())?;
        let mean: f64 = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
        if (mean - 1.0).abs() > 1e-12 {
            return fail(format!("order {order} energy {mean}"));
        }
        let mut rng = RngStream::new(order as u64, 1);
        let bits = rng.bits(c.bits_per_symbol() * 64);
        let syms = map_bits(&bits, &c).map_err(|e| e.to_string())?;
        if demap_bits(&syms, &c) != bits {
            return fail(format!("order {order} map/demap mismatch"));
        }
    }
    Ok(())
}

fn coding_chain() -> Result<(), String> {
    for rate in [
        CodeRate::Half,
        CodeRate::TwoThirds,
        CodeRate::ThreeQuarters,
        CodeRate::FiveSixths,
    ] {
        let cfg = CodeConfig::new(rate);
        let mut rng = RngStream::new(0xF02, rate as u64);
        let info = rng.bits(rate.fraction().0 * 60);
        let coded = conv_encode(&info, &cfg);
        let soft = depuncture_hard(&coded, rate, 2 * (info.len() + TAIL_BITS))
            .map_err(|e| e.to_string())?;
        if viterbi_decode(&soft, &cfg) != info {
            return fail(format!("clean decode failed at rate {rate:?}"));
        }
    }
    Ok(())
}

fn interleaver() -> Result<(), String> {
    let il = Interleaver::new(8, 12);
    let data: Vec<usize> = (0..96).collect();
    let map = il.interleave(&data).map_err(|e| e.to_string())?;
    if il.deinterleave(&map).map_err(|e| e.to_string())? != data {
        return fail("roundtrip failed".into());
    }
    for start in 0..96 {
        let run = &map[start..(start + 12).min(96)];
        for i in 0..run.len() {
            for j in i + 1..run.len() {
                if run[i].abs_diff(run[j]) < 8 {
                    return fail(format!("spread violation at {start}"));
                }
            }
        }
    }
    Ok(())
}

fn complement_symmetry() -> Result<(), String> {
    let ch = EraChannel::randomized(&ChannelRealizationConfig::new(64, 16), 0xF03);
    let mut rng = RngStream::new(0xF04, 0);
    let p = IrsConfiguration::random(16, &mut rng);
    let a = ch.irs_subcarrier_response(&p).map_err(|e| e.to_string())?;
    let b = ch
        .irs_subcarrier_response(&p.complement())
        .map_err(|e| e.to_string())?;
    for k in 0..64 {
        if (a[k] + b[k]).norm() > 1e-12 {
            return fail(format!("asymmetry at bin {k}"));
        }
    }
    Ok(())
}

fn jsr_calibration() -> Result<(), String> {
    let ch = EraChannel::randomized(&ChannelRealizationConfig::new(128, 64), 0xF05);
    let cal = ch.calibrated_to_jsr(-17.0).map_err(|e| e.to_string())?;
    let measured = cal.measured_jsr_db().map_err(|e| e.to_string())?;
    if (measured + 17.0).abs() > 1e-6 {
        return fail(format!("re-measured JSR {measured} dB"));
    }
    Ok(())
}

fn static_loopback() -> Result<(), String> {
    let cfg = OfdmConfig::default();
    let ch = EraChannel::randomized(&ChannelRealizationConfig::new(cfg.fft_size, 32), 0xF06)
        .calibrated_to_jsr(-10.0)
        .map_err(|e| e.to_string())?;
    let mut rng0 = RngStream::new(0xF07, 0);
    let pattern = IrsConfiguration::random(32, &mut rng0);
    let sched = era_core::attacker::IrsSchedule::static_pattern(pattern);
    for mcs in McsProfile::all() {
        let mut rng = RngStream::new(0xF08, mcs.index as u64);
        let payload = rng.bits(cfg.payload_bits(&mcs).map_err(|e| e.to_string())?);
        let packet = build_packet(&payload, &mcs, &cfg).map_err(|e| e.to_string())?;
        let rx = ch
            .apply(&packet.samples, &sched, cfg.sample_rate, 0.0, &mut rng)
            .map_err(|e| e.to_string())?;
        let report = receive_packet(&rx, &cfg, &mcs, &packet).map_err(|e| e.to_string())?;
        if !report.packet_ok {
            return fail(format!("MCS {} failed noiseless loopback", mcs.index));
        }
        if report.evm_per_symbol.iter().any(|&e| e > 1e-10) {
            return fail(format!("MCS {} EVM above 1e-10", mcs.index));
        }
    }
    Ok(())
}

fn link_budget() -> Result<(), String> {
    let g = LinkGeometry::perpendicular(30.0, 10.0, 5.35e9);
    let area = required_surface_area(&g, 0.1).map_err(|e| e.to_string())?;
    if (area - 0.19).abs() / 0.19 > 0.05 {
        return fail(format!("reference area {area} m^2"));
    }
    Ok(())
}

fn optimizer_monotone() -> Result<(), String> {
    let ch = EraChannel::randomized(&ChannelRealizationConfig::new(64, 24), 0xF09)
        .calibrated_to_jsr(-6.0)
        .map_err(|e| e.to_string())?;
    let mut probe = MagnitudeProbe::noiseless(&ch);
    let mut rng = RngStream::new(0xF0A, 0);
    let out = optimize_patterns(
        &mut probe,
        24,
        &OptimizerSettings::default(),
        |a, b| csi_distance(a, b),
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    for pair in out.trace.windows(2) {
        if pair[1] < pair[0] {
            return fail(format!("trace decreased: {pair:?}"));
        }
    }
    if out.probe_count != 2 * (1 + 2 * 24) {
        return fail(format!("probe count {}", out.probe_count));
    }
    Ok(())
}

fn per_bound() -> Result<(), String> {
    if per_upper_bound(1.0, 2.0) != Ok(0.5) || per_upper_bound(3.0, 2.0) != Ok(1.0) {
        return fail("bound values".into());
    }
    Ok(())
}

fn ici_equivalence() -> Result<(), String> {
    let err = ici_equivalence_error(128, 32, 5, 5, 0xF0B);
    if err >= 1e-9 {
        return fail(format!("reconstruction error {err:.3e}"));
    }
    Ok(())
}

fn rng_determinism() -> Result<(), String> {
    let mut a = RngStream::new(0xF0C, 9);
    let mut b = RngStream::new(0xF0C, 9);
    for _ in 0..128 {
        if a.next_f64() != b.next_f64() {
            return fail("streams diverged".into());
        }
    }
    Ok(())
}

const CHECKS: &[Check] = &[
    ("fft-roundtrip", fft_roundtrip),
    ("parseval", parseval),
    ("constellations", constellations),
    ("coding-chain", coding_chain),
    ("interleaver-spread", interleaver),
    ("complement-symmetry", complement_symmetry),
    ("jsr-calibration", jsr_calibration),
    ("static-loopback", static_loopback),
    ("link-budget", link_budget),
    ("optimizer-monotone", optimizer_monotone),
    ("per-bound", per_bound),
    ("ici-equivalence", ici_equivalence),
    ("rng-determinism", rng_determinism),
];

/// Runs every check; returns the report text and whether all passed.
pub fn run() -> (String, bool) {
    let mut out = String::new();
    let mut failed = 0usize;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => out.push_str(&format!("PASS {name}\n")),
            Err(msg) => {
                failed += 1;
                out.push_str(&format!("FAIL {name}: {msg}\n"));
            }
        }
    }
    out.push_str(&format!(
        "selftest: {} passed, {} failed\n",
        CHECKS.len() - failed,
        failed
    ));
    (out, failed == 0)
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        let (report, ok) = super::run();
        assert!(ok, "{report}");
    }

    #[test]
    fn report_is_deterministic() {
        assert_eq!(super::run().0, super::run().0);
    }
}
