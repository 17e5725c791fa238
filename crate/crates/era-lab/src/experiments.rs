//! Experiment runners: Monte-Carlo PER sweeps, the surface-size curve, the
//! optimizer demonstration, and the interference-model consistency check.
//!
//! Every trial owns an RNG stream derived from
//! `(master seed, experiment id, mcs, grid index, trial index)`, so results
//! are byte-identical regardless of how trials are scheduled across threads.

use num_complex::Complex64;
use rayon::prelude::*;

use era_core::analysis::{irs_ici_power, IciMatrix};
use era_core::attacker::{
    csi_distance, optimize_patterns, IrsConfiguration, IrsSchedule, OptimizerSettings,
};
use era_core::channel::{convolve_time_varying, Cir, EraChannel, MagnitudeProbe};
use era_core::dsp::{fft, ifft, RngStream};
use era_core::ofdm::{
    build_packet, noise_variance_for_snr, receive_packet, McsProfile, OfdmConfig,
};

use crate::config::ExperimentConfig;
use crate::results::{per_points_csv, PerPoint, RunWriter};
use crate::HarnessError;

// Experiment ids entering the RNG stream derivation.
const EXP_PER_VS_JSR: u64 = 1;
const EXP_ERA_VS_NOISE: u64 = 2;
const EXP_PER_VS_FREQ: u64 = 3;
const EXP_OPTIMIZER: u64 = 4;

/// Average transmitted sample power of a packet with unit-energy symbols
/// (pilot fills all bins, data symbols fill the data bins). Used to match
/// jamming noise power to the surface's signal power.
pub fn mean_tx_sample_power(cfg: &OfdmConfig) -> f64 {
    let k = cfg.fft_size as f64;
    let nd = cfg.data_subcarriers as f64;
    let d = cfg.data_symbols as f64;
    (k + d * nd) / ((1.0 + d) * k * k)
}

/// Noise variance whose per-sample power equals the surface's contribution
/// to the received signal; the noise-jamming comparison arm runs at this
/// level so both attacks spend the same power budget.
pub fn matched_noise_variance(ch: &EraChannel, cfg: &OfdmConfig) -> Result<f64, HarnessError> {
    Ok(ch.irs_reference_power()? * mean_tx_sample_power(cfg))
}

/// One Monte-Carlo grid point: builds, transmits, and adjudicates
/// `packets` packets with per-trial streams, in parallel.
#[allow(clippy::too_many_arguments)]
pub fn run_point(
    ofdm: &OfdmConfig,
    mcs: &McsProfile,
    channel: &EraChannel,
    schedule: &IrsSchedule,
    noise_var: f64,
    master_seed: u64,
    path: &[u64],
    packets: usize,
    grid: f64,
) -> Result<PerPoint, HarnessError> {
    let payload_bits = ofdm.payload_bits(mcs)?;
    let period = schedule.period();

    let errors: u64 = (0..packets as u64)
        .into_par_iter()
        .map(|trial| {
            let mut stream_path = path.to_vec();
            stream_path.push(trial);
            let mut rng = RngStream::from_path(master_seed, &stream_path);
            let payload = rng.bits(payload_bits);
            // Randomize the packet start within the toggle period.
            let u = rng.next_f64();
            let offset = if period.is_finite() { u * period } else { 0.0 };
            let sched = schedule.clone().with_offset(offset);

            let packet = build_packet(&payload, mcs, ofdm).expect("validated config");
            let rx = channel
                .apply(&packet.samples, &sched, ofdm.sample_rate, noise_var, &mut rng)
                .expect("pattern lengths validated");
            let report = receive_packet(&rx, ofdm, mcs, &packet).expect("sample count matches");
            (!report.packet_ok) as u64
        })
        .sum();

    let mut first_path = path.to_vec();
    first_path.push(0);
    let seed = RngStream::from_path(master_seed, &first_path).stream();
    Ok(PerPoint::new(mcs.index, grid, packets as u64, errors, seed))
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Runtime(e.to_string()))
}

fn base_channel(cfg: &ExperimentConfig) -> EraChannel {
    EraChannel::randomized(&cfg.channel.realization(cfg.ofdm.fft_size), cfg.channel_seed)
}

fn mcs_list(cfg: &ExperimentConfig) -> Vec<McsProfile> {
    cfg.mcs
        .iter()
        .map(|&i| McsProfile::from_index(i).expect("validated"))
        .collect()
}

// ---------------------------------------------------------------------------
// PER vs JSR
// ---------------------------------------------------------------------------

/// Complementary-pattern toggling at the first configured frequency over the
/// JSR grid, high receiver SNR.
pub fn run_per_vs_jsr(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<PerPoint>, HarnessError> {
    cfg.validate()?;
    let ch = base_channel(cfg);
    let noise_var = noise_variance_for_snr(ch.direct_power(), cfg.ofdm.fft_size, cfg.snr_db);
    let f_irs = cfg.f_irs_hz[0];
    let sched = IrsSchedule::all_zero_one(cfg.channel.n_elements, f_irs);

    let mut points = Vec::new();
    pool(threads)?.install(|| -> Result<(), HarnessError> {
        for (ji, &jsr) in cfg.jsr_db.iter().enumerate() {
            let calibrated = ch.calibrated_to_jsr(jsr)?;
            for mcs in mcs_list(cfg) {
                points.push(run_point(
                    &cfg.ofdm,
                    &mcs,
                    &calibrated,
                    &sched,
                    noise_var,
                    cfg.master_seed,
                    &[EXP_PER_VS_JSR, mcs.index as u64, ji as u64],
                    cfg.packets_per_point,
                    jsr,
                )?);
            }
        }
        Ok(())
    })?;

    let writer = RunWriter::new(&cfg.out_dir, "per-vs-jsr", cfg)?;
    let rows: Vec<(Option<&str>, &PerPoint)> = points.iter().map(|p| (None, p)).collect();
    writer.write_text("per_vs_jsr.csv", &per_points_csv("jsr_db", &rows))?;
    writer.write_text("channel.toml", &ch.to_toml())?;
    writer.write_manifest()?;
    Ok(points)
}

// ---------------------------------------------------------------------------
// ERA vs noise jamming at equal power
// ---------------------------------------------------------------------------

/// Paired sweeps: the toggle attack on a noise-free channel against a static
/// surface plus AWGN of equal received power.
pub fn run_era_vs_noise(
    cfg: &ExperimentConfig,
    threads: usize,
) -> Result<(Vec<PerPoint>, Vec<PerPoint>), HarnessError> {
    cfg.validate()?;
    let ch = base_channel(cfg);
    let f_irs = cfg.f_irs_hz[0];
    let n = cfg.channel.n_elements;
    let era_sched = IrsSchedule::all_zero_one(n, f_irs);
    let static_sched = IrsSchedule::static_pattern(IrsConfiguration::all_ones(n));

    let mut era_points = Vec::new();
    let mut noise_points = Vec::new();
    pool(threads)?.install(|| -> Result<(), HarnessError> {
        for (ji, &jsr) in cfg.jsr_db.iter().enumerate() {
            let calibrated = ch.calibrated_to_jsr(jsr)?;
            let matched_var = matched_noise_variance(&calibrated, &cfg.ofdm)?;
            for mcs in mcs_list(cfg) {
                // Identical stream paths pair the two arms trial by trial.
                let path = [EXP_ERA_VS_NOISE, mcs.index as u64, ji as u64];
                era_points.push(run_point(
                    &cfg.ofdm,
                    &mcs,
                    &calibrated,
                    &era_sched,
                    0.0,
                    cfg.master_seed,
                    &path,
                    cfg.packets_per_point,
                    jsr,
                )?);
                noise_points.push(run_point(
                    &cfg.ofdm,
                    &mcs,
                    &calibrated,
                    &static_sched,
                    matched_var,
                    cfg.master_seed,
                    &path,
                    cfg.packets_per_point,
                    jsr,
                )?);
            }
        }
        Ok(())
    })?;

    let writer = RunWriter::new(&cfg.out_dir, "era-vs-noise", cfg)?;
    let rows: Vec<(Option<&str>, &PerPoint)> = era_points
        .iter()
        .map(|p| (Some("era"), p))
        .chain(noise_points.iter().map(|p| (Some("noise"), p)))
        .collect();
    writer.write_text("era_vs_noise.csv", &per_points_csv("jsr_db", &rows))?;
    writer.write_text("channel.toml", &ch.to_toml())?;
    writer.write_manifest()?;
    Ok((era_points, noise_points))
}

// ---------------------------------------------------------------------------
// PER vs modulation frequency
// ---------------------------------------------------------------------------

/// Sweeps the toggle frequency at fixed JSR (`jsr_db[0]`).
pub fn run_per_vs_freq(cfg: &ExperimentConfig, threads: usize) -> Result<Vec<PerPoint>, HarnessError> {
    cfg.validate()?;
    let ch = base_channel(cfg);
    let calibrated = ch.calibrated_to_jsr(cfg.jsr_db[0])?;
    let noise_var = noise_variance_for_snr(ch.direct_power(), cfg.ofdm.fft_size, cfg.snr_db);

    let mut points = Vec::new();
    pool(threads)?.install(|| -> Result<(), HarnessError> {
        for (fi, &f_irs) in cfg.f_irs_hz.iter().enumerate() {
            let sched = IrsSchedule::all_zero_one(cfg.channel.n_elements, f_irs);
            for mcs in mcs_list(cfg) {
                points.push(run_point(
                    &cfg.ofdm,
                    &mcs,
                    &calibrated,
                    &sched,
                    noise_var,
                    cfg.master_seed,
                    &[EXP_PER_VS_FREQ, mcs.index as u64, fi as u64],
                    cfg.packets_per_point,
                    f_irs,
                )?);
            }
        }
        Ok(())
    })?;

    let writer = RunWriter::new(&cfg.out_dir, "per-vs-freq", cfg)?;
    let rows: Vec<(Option<&str>, &PerPoint)> = points.iter().map(|p| (None, p)).collect();
    writer.write_text("per_vs_freq.csv", &per_points_csv("f_irs_hz", &rows))?;
    writer.write_text("channel.toml", &ch.to_toml())?;
    writer.write_manifest()?;
    Ok(points)
}

// ---------------------------------------------------------------------------
// Surface size vs distance
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSizeRow {
    pub d_ae_m: f64,
    pub d_ab_m: f64,
    pub d_eb_m: f64,
    pub area_m2: f64,
}

/// Minimum surface area achieving the configured JSR over the distance grid
/// (perpendicular-offset geometry, free space).
pub fn run_surface_size(cfg: &ExperimentConfig) -> Result<Vec<SurfaceSizeRow>, HarnessError> {
    cfg.validate()?;
    let geo = &cfg.geometry;
    let jsr = 10f64.powf(geo.jsr_db / 10.0);
    let mut rows = Vec::new();
    for &d_ae in &geo.d_ae_m {
        for &d_ab in &geo.d_ab_m {
            let g = era_core::channel::LinkGeometry::perpendicular(d_ab, d_ae, geo.frequency_hz);
            let area = era_core::channel::required_surface_area(&g, jsr)?;
            rows.push(SurfaceSizeRow {
                d_ae_m: d_ae,
                d_ab_m: d_ab,
                d_eb_m: g.d_eb,
                area_m2: area,
            });
        }
    }

    let mut csv = String::from("d_ae_m,d_ab_m,d_eb_m,area_m2\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            r.d_ae_m, r.d_ab_m, r.d_eb_m, r.area_m2
        ));
    }
    let writer = RunWriter::new(&cfg.out_dir, "surface-size", cfg)?;
    writer.write_text("surface_size.csv", &csv)?;
    writer.write_manifest()?;
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Optimizer demonstration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OptimizerDemo {
    pub initial0: IrsConfiguration,
    pub initial1: IrsConfiguration,
    pub optimized0: IrsConfiguration,
    pub optimized1: IrsConfiguration,
    pub initial_distance: f64,
    pub trace: Vec<f64>,
    pub per_all01: PerPoint,
    pub per_optimized: PerPoint,
}

/// Runs the greedy optimization on a simulated channel, exports the distance
/// trace and the before/after channel responses, then compares the packet
/// error rate of the optimized pair against all-'0'/all-'1' toggling under
/// identical trial streams.
pub fn run_optimizer_demo(
    cfg: &ExperimentConfig,
    threads: usize,
) -> Result<OptimizerDemo, HarnessError> {
    cfg.validate()?;
    let n = cfg.channel.n_elements;
    let opt = &cfg.optimizer;
    let ch = base_channel(cfg).calibrated_to_jsr(opt.jsr_db)?;

    let mut rng = RngStream::from_path(cfg.master_seed, &[EXP_OPTIMIZER, 0]);
    let mut init_rng = rng.clone();
    let initial0 = IrsConfiguration::random(n, &mut init_rng);
    let initial1 = IrsConfiguration::random(n, &mut init_rng);

    let settings = OptimizerSettings {
        rounds: opt.rounds,
        probe_repeats: opt.probe_repeats,
        ..Default::default()
    };
    let outcome = match opt.probe_snr_db {
        None => {
            let mut probe = MagnitudeProbe::noiseless(&ch);
            optimize_patterns(&mut probe, n, &settings, |a, b| csi_distance(a, b), &mut rng)?
        }
        Some(snr) => {
            let probe_rng = RngStream::from_path(cfg.master_seed, &[EXP_OPTIMIZER, 1]);
            let mut probe = MagnitudeProbe::noisy(&ch, snr, probe_rng);
            optimize_patterns(&mut probe, n, &settings, |a, b| csi_distance(a, b), &mut rng)?
        }
    };

    // Paired PER comparison on the most robust configured MCS.
    let mcs = McsProfile::from_index(opt.compare_mcs)
        .ok_or_else(|| HarnessError::Config(format!("unknown MCS {}", opt.compare_mcs)))?;
    let noise_var = noise_variance_for_snr(ch.direct_power(), cfg.ofdm.fft_size, cfg.snr_db);
    let sched_all01 = IrsSchedule::all_zero_one(n, opt.f_irs_hz);
    let sched_opt = IrsSchedule::new(
        outcome.pattern0.clone(),
        outcome.pattern1.clone(),
        opt.f_irs_hz,
    );

    let path = [EXP_OPTIMIZER, mcs.index as u64, 2];
    let (per_all01, per_optimized) = pool(threads)?.install(|| {
        let a = run_point(
            &cfg.ofdm,
            &mcs,
            &ch,
            &sched_all01,
            noise_var,
            cfg.master_seed,
            &path,
            cfg.packets_per_point,
            opt.jsr_db,
        )?;
        let b = run_point(
            &cfg.ofdm,
            &mcs,
            &ch,
            &sched_opt,
            noise_var,
            cfg.master_seed,
            &path,
            cfg.packets_per_point,
            opt.jsr_db,
        )?;
        Ok::<_, HarnessError>((a, b))
    })?;

    // Exports.
    let writer = RunWriter::new(&cfg.out_dir, "optimize", cfg)?;
    let mut trace_csv = String::from("visit,distance\n");
    trace_csv.push_str(&format!("0,{:.9}\n", outcome.initial_distance));
    for (i, d) in outcome.trace.iter().enumerate() {
        trace_csv.push_str(&format!("{},{:.9}\n", i + 1, d));
    }
    writer.write_text("optimizer_trace.csv", &trace_csv)?;

    let mag = |p: &IrsConfiguration| -> Result<Vec<f64>, HarnessError> {
        Ok(ch.subcarrier_response(p)?.iter().map(|h| h.norm()).collect())
    };
    let (b0, b1, a0, a1) = (
        mag(&initial0)?,
        mag(&initial1)?,
        mag(&outcome.pattern0)?,
        mag(&outcome.pattern1)?,
    );
    let mut csi_csv = String::from("k,h0_before,h1_before,h0_after,h1_after\n");
    for k in 0..cfg.ofdm.fft_size {
        csi_csv.push_str(&format!(
            "{k},{:.9},{:.9},{:.9},{:.9}\n",
            b0[k], b1[k], a0[k], a1[k]
        ));
    }
    writer.write_text("optimizer_csi.csv", &csi_csv)?;

    let rows = [
        (Some("all01"), &per_all01),
        (Some("optimized"), &per_optimized),
    ];
    writer.write_text("optimizer_per.csv", &per_points_csv("jsr_db", &rows))?;

    let mut patterns = String::new();
    patterns.push_str(&format!("initial0 = \"{}\"\n", initial0.to_hex()));
    patterns.push_str(&format!("initial1 = \"{}\"\n", initial1.to_hex()));
    patterns.push_str(&format!("optimized0 = \"{}\"\n", outcome.pattern0.to_hex()));
    patterns.push_str(&format!("optimized1 = \"{}\"\n", outcome.pattern1.to_hex()));
    writer.write_text("optimizer_patterns.toml", &patterns)?;
    writer.write_text("channel.toml", &ch.to_toml())?;
    writer.write_manifest()?;

    Ok(OptimizerDemo {
        initial0,
        initial1,
        optimized0: outcome.pattern0,
        optimized1: outcome.pattern1,
        initial_distance: outcome.initial_distance,
        trace: outcome.trace,
        per_all01,
        per_optimized,
    })
}

// ---------------------------------------------------------------------------
// Interference-model consistency check
// ---------------------------------------------------------------------------

/// Reconstruction error of the coupling-matrix model against time-domain
/// simulation, maximized over `trials` random time-varying channels.
pub fn ici_equivalence_error(
    fft_size: usize,
    cp_len: usize,
    taps: usize,
    trials: usize,
    seed: u64,
) -> f64 {
    let mut rng = RngStream::from_path(seed, &[0x1c1]);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let window: Vec<Cir> = (0..fft_size)
            .map(|_| Cir::new((0..taps).map(|_| rng.next_cn(0.5)).collect()))
            .collect();
        let x: Vec<Complex64> = (0..fft_size).map(|_| rng.next_cn(1.0)).collect();
        let time = ifft(&x).unwrap();
        let mut tx = Vec::with_capacity(cp_len + fft_size);
        tx.extend_from_slice(&time[fft_size - cp_len..]);
        tx.extend_from_slice(&time);
        let mut cirs = vec![window[0].clone(); cp_len];
        cirs.extend(window.iter().cloned());
        let rx = convolve_time_varying(&tx, &cirs);
        let y = fft(&rx[cp_len..cp_len + fft_size]).unwrap();
        let reconstructed = IciMatrix::from_cir_window(&window).apply(&x);
        let scale: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for k in 0..fft_size {
            worst = worst.max((y[k] - reconstructed[k]).norm() / scale);
        }
    }
    worst
}

/// Mean absolute per-subcarrier deviation (dB) between the simulated SIR
/// under a window-aligned square-wave surface tap and the closed-form
/// prediction, averaged over `symbols` random OFDM symbols. Also returns the
/// report used for the prediction.
pub fn sir_identity_deviation(
    fft_size: usize,
    cp_len: usize,
    symbols: usize,
    seed: u64,
) -> (f64, era_core::analysis::SirReport) {
    let mut rng = RngStream::from_path(seed, &[0x51e]);
    let mut direct: Vec<Complex64> = (0..6)
        .map(|l| rng.next_cn(10f64.powf(-0.3 * l as f64)))
        .collect();
    let p: f64 = direct.iter().map(|t| t.norm_sqr()).sum();
    for t in &mut direct {
        *t /= p.sqrt();
    }
    let gamma = Complex64::from_polar(0.35, rng.next_phase());

    let d_k = Cir::new(direct.clone())
        .frequency_response(fft_size)
        .unwrap();
    let mut interference = vec![0.0f64; fft_size];
    for _ in 0..symbols {
        let x: Vec<Complex64> = (0..fft_size).map(|_| rng.next_cn(1.0)).collect();
        let time = ifft(&x).unwrap();
        let mut tx = Vec::with_capacity(cp_len + fft_size);
        tx.extend_from_slice(&time[fft_size - cp_len..]);
        tx.extend_from_slice(&time);
        let mut cirs = Vec::with_capacity(cp_len + fft_size);
        for out in 0..cp_len + fft_size {
            let m = out.saturating_sub(cp_len);
            let sign = if m < fft_size / 2 { 1.0 } else { -1.0 };
            let mut taps = direct.clone();
            taps[0] += gamma * sign;
            cirs.push(Cir::new(taps));
        }
        let rx = convolve_time_varying(&tx, &cirs);
        let y = fft(&rx[cp_len..cp_len + fft_size]).unwrap();
        for k in 0..fft_size {
            interference[k] += (y[k] - d_k[k] * x[k]).norm_sqr();
        }
    }

    let tap_series: Vec<Complex64> = (0..fft_size)
        .map(|m| if m < fft_size / 2 { gamma } else { -gamma })
        .collect();
    let report = irs_ici_power(&tap_series, &d_k);
    let mut dev = 0.0;
    for k in 0..fft_size {
        let measured = 10.0 * (d_k[k].norm_sqr() / (interference[k] / symbols as f64)).log10();
        dev += (measured - report.sir_db(k)).abs();
    }
    (dev / fft_size as f64, report)
}

/// `ici-check` subcommand: runs both consistency checks at desk scale and
/// writes the SIR report CSV. Returns true when both pass.
pub fn run_ici_check(cfg: &ExperimentConfig) -> Result<bool, HarnessError> {
    let k = cfg.ofdm.fft_size;
    let cp = cfg.ofdm.cp_len;
    let err = ici_equivalence_error(k, cp, 5, 20, cfg.master_seed);
    let ici_ok = err < 1e-9;
    println!(
        "{} ici-matrix equivalence: max relative error {err:.3e} (tolerance 1e-9)",
        if ici_ok { "PASS" } else { "FAIL" }
    );

    let (dev_db, report) = sir_identity_deviation(k, cp, 1000, cfg.master_seed);
    let sir_ok = dev_db < 0.2;
    println!(
        "{} surface-tap SIR identity: mean |deviation| {dev_db:.4} dB (tolerance 0.2 dB)",
        if sir_ok { "PASS" } else { "FAIL" }
    );

    let writer = RunWriter::new(&cfg.out_dir, "ici-check", cfg)?;
    writer.write_text("sir_report.csv", &report.to_csv())?;
    // Coupling matrix of a window-aligned square-wave tap fixture.
    let gamma = Complex64::new(0.35, 0.0);
    let window: Vec<Cir> = (0..k)
        .map(|m| Cir::new(vec![if m < k / 2 { gamma } else { -gamma }]))
        .collect();
    writer.write_text("ici_matrix.csv", &IciMatrix::from_cir_window(&window).to_csv())?;
    writer.write_manifest()?;
    Ok(ici_ok && sir_ok)
}
