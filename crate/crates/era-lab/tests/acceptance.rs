//! Acceptance suite: every exit criterion runs at its stated tolerance and
//! prints one PASS/FAIL line. Run with `--nocapture` to watch the lines.

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;

use era_core::analysis::predicted_symbol_error;
use era_core::attacker::{
    csi_distance, optimize_patterns, IrsConfiguration, IrsSchedule, OptimizerSettings,
};
use era_core::channel::{
    required_surface_area, ChannelRealizationConfig, Cir, EraChannel, IrsElement, LinkGeometry,
    MagnitudeProbe,
};
use era_core::dsp::{fft, RngStream};
use era_core::ofdm::{build_packet, estimate_channel_ls, McsProfile, OfdmConfig};
use era_lab::config::ExperimentConfig;
use era_lab::experiments::{
    ici_equivalence_error, run_era_vs_noise, run_optimizer_demo, run_per_vs_freq, run_per_vs_jsr,
    run_point, sir_identity_deviation,
};
use era_lab::results::PerPoint;
use era_lab::selftest;

fn temp_out(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("era-acceptance-{}-{tag}", std::process::id()))
}

// ---------------------------------------------------------------------------
// Criterion 1: zero-mean constant-magnitude surface tap -> SIR identity
// ---------------------------------------------------------------------------

fn c1_sir_identity() -> Result<String, String> {
    let t0 = Instant::now();
    let (dev_db, report) = sir_identity_deviation(128, 32, 1000, 0xA1);
    let elapsed = t0.elapsed().as_secs_f64();
    if !report.closed_form {
        return Err("fixture did not satisfy the closed-form preconditions".into());
    }
    if dev_db > 0.2 {
        return Err(format!("mean |SIR deviation| {dev_db:.3} dB > 0.2 dB"));
    }
    if elapsed > 5.0 {
        return Err(format!("took {elapsed:.1} s > 5 s"));
    }
    Ok(format!(
        "mean |SIR deviation| {dev_db:.4} dB over 1000 symbols (tolerance 0.2 dB)"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 2: coupling-matrix reconstruction of the received symbol
// ---------------------------------------------------------------------------

fn c2_ici_equivalence() -> Result<String, String> {
    let t0 = Instant::now();
    let err = ici_equivalence_error(128, 32, 5, 50, 0xA2);
    let elapsed = t0.elapsed().as_secs_f64();
    if err >= 1e-9 {
        return Err(format!("max relative reconstruction error {err:.3e} >= 1e-9"));
    }
    if elapsed > 5.0 {
        return Err(format!("took {elapsed:.1} s > 5 s"));
    }
    Ok(format!(
        "50 random time-varying channels, max relative error {err:.3e}"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 3: outdated-equalizer symbol error is exact
// ---------------------------------------------------------------------------

fn switch_after_pilot(cfg: &OfdmConfig, p0: IrsConfiguration, p1: IrsConfiguration) -> IrsSchedule {
    let t_switch = (cfg.symbol_len() as f64 - 0.5) / cfg.sample_rate;
    let period = 40.0 * cfg.packet_duration();
    IrsSchedule::new(p0, p1, 1.0 / period).with_offset(period / 2.0 - t_switch)
}

fn equalized_errors(
    cfg: &OfdmConfig,
    ch: &EraChannel,
    sched: &IrsSchedule,
    seed: u64,
) -> Result<Vec<(usize, Complex64, Complex64)>, String> {
    // Returns (bin, X, equalized) for every data bin of every data symbol.
    let mcs = McsProfile::from_index(2).unwrap();
    let mut rng = RngStream::new(seed, 0);
    let payload = rng.bits(cfg.payload_bits(&mcs).map_err(|e| e.to_string())?);
    let packet = build_packet(&payload, &mcs, cfg).map_err(|e| e.to_string())?;
    let rx = ch
        .apply(&packet.samples, sched, cfg.sample_rate, 0.0, &mut rng)
        .map_err(|e| e.to_string())?;
    let window = |n: usize| {
        let start = n * cfg.symbol_len() + cfg.cp_len;
        fft(&rx[start..start + cfg.fft_size]).unwrap()
    };
    let eq = estimate_channel_ls(&window(0), &packet.grids[0]).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for n in 0..cfg.data_symbols {
        let y = window(1 + n);
        for &k in &cfg.data_bins() {
            let x = packet.grids[1 + n][k];
            out.push((k, x, y[k] / eq.h_hat()[k]));
        }
    }
    Ok(out)
}

fn c3_symbol_error_exactness() -> Result<String, String> {
    let cfg = OfdmConfig::default();
    let mut worst = 0.0f64;
    for trial in 0..100u64 {
        let n = 12;
        let ch = EraChannel::randomized(&ChannelRealizationConfig::new(cfg.fft_size, n), 0xA30 + trial)
            .calibrated_to_jsr(-4.0)
            .map_err(|e| e.to_string())?;
        let mut rng = RngStream::new(0xA31, trial);
        let p0 = IrsConfiguration::random(n, &mut rng);
        let p1 = IrsConfiguration::random(n, &mut rng);
        let h0 = ch.subcarrier_response(&p0).map_err(|e| e.to_string())?;
        let h1 = ch.subcarrier_response(&p1).map_err(|e| e.to_string())?;
        let sched = switch_after_pilot(&cfg, p0, p1);
        for (k, x, equalized) in equalized_errors(&cfg, &ch, &sched, 0xA32 + trial)? {
            let predicted = predicted_symbol_error(h0[k], h1[k], x, None)
                .map_err(|e| e.to_string())?;
            worst = worst.max(((equalized - x) - predicted).norm());
        }
    }
    if worst >= 1e-9 {
        return Err(format!("max |error - prediction| {worst:.3e} >= 1e-9"));
    }

    // Complementary patterns with no direct path: equalized symbol = -X.
    let ch = EraChannel::new(
        cfg.fft_size,
        Cir::new(vec![Complex64::new(0.0, 0.0)]),
        0,
        vec![IrsElement {
            amplitude: 1.0,
            phase: 0.4,
            dispersion: 0.0,
        }],
    );
    let sched = switch_after_pilot(
        &cfg,
        IrsConfiguration::all_zeros(1),
        IrsConfiguration::all_ones(1),
    );
    let mut worst_flip = 0.0f64;
    for (_, x, equalized) in equalized_errors(&cfg, &ch, &sched, 0xA33)? {
        worst_flip = worst_flip.max((equalized + x).norm());
    }
    if worst_flip >= 1e-9 {
        return Err(format!("sign-flip residual {worst_flip:.3e} >= 1e-9"));
    }
    Ok(format!(
        "100 random channel pairs: max deviation {worst:.3e}; complementary no-direct case residual {worst_flip:.3e}"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 4: free-space link budget reference value
// ---------------------------------------------------------------------------

fn c4_link_budget() -> Result<String, String> {
    let g = LinkGeometry::perpendicular(30.0, 10.0, 5.35e9);
    let t0 = Instant::now();
    let area = required_surface_area(&g, 0.1).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed().as_secs_f64();
    let rel = (area - 0.19).abs() / 0.19;
    if rel > 0.05 {
        return Err(format!("area {area:.4} m^2 deviates {:.1}% from 0.19 m^2", rel * 100.0));
    }
    if elapsed > 1e-3 {
        return Err(format!("took {elapsed:.6} s > 1 ms"));
    }
    Ok(format!("area {area:.4} m^2, {:.2}% from 0.19 m^2", rel * 100.0))
}

// ---------------------------------------------------------------------------
// Criterion 5: slow-toggle packet-error bound
// ---------------------------------------------------------------------------

fn c5_per_bound() -> Result<String, String> {
    let t0 = Instant::now();
    let cfg = OfdmConfig::default();
    // No direct path, one unit element: every pattern switch inside the
    // packet flips the channel sign and kills the packet.
    let ch = EraChannel::new(
        cfg.fft_size,
        Cir::new(vec![Complex64::new(0.0, 0.0)]),
        0,
        vec![IrsElement {
            amplitude: 1.0,
            phase: 1.3,
            dispersion: 0.0,
        }],
    );
    // Pattern hold duration = 10 packet durations (period twice that).
    let t_p = cfg.packet_duration();
    let hold = 10.0 * t_p;
    let sched = IrsSchedule::new(
        IrsConfiguration::all_zeros(1),
        IrsConfiguration::all_ones(1),
        1.0 / (2.0 * hold),
    );
    let bound = era_core::analysis::per_upper_bound(t_p, hold).map_err(|e| e.to_string())?;
    assert!((bound - 0.1).abs() < 1e-12);

    let mcs = McsProfile::from_index(0).unwrap();
    let packets = 5000usize;
    let point = run_point(&cfg, &mcs, &ch, &sched, 0.0, 0xA5, &[0xC5], packets, 0.0)
        .map_err(|e| e.to_string())?;
    let sigma = (bound * (1.0 - bound) / packets as f64).sqrt();
    let (lo, hi) = (bound - 3.0 * sigma, bound + 3.0 * sigma);
    let elapsed = t0.elapsed().as_secs_f64();
    if point.per < lo || point.per > hi {
        return Err(format!(
            "PER {:.4} outside [{lo:.4}, {hi:.4}] around the {bound:.2} bound",
            point.per
        ));
    }
    if elapsed > 120.0 {
        return Err(format!("took {elapsed:.1} s > 2 min"));
    }
    Ok(format!(
        "measured PER {:.4} within 3-sigma band [{lo:.4}, {hi:.4}] of the {bound:.2} bound ({packets} packets)",
        point.per
    ))
}

// ---------------------------------------------------------------------------
// Monte-Carlo sweep helpers
// ---------------------------------------------------------------------------

fn points_for(points: &[PerPoint], mcs: u8) -> Vec<&PerPoint> {
    let mut v: Vec<&PerPoint> = points.iter().filter(|p| p.mcs == mcs).collect();
    v.sort_by(|a, b| a.grid.partial_cmp(&b.grid).unwrap());
    v
}

/// "Non-decreasing modulo intervals": no step is significantly downward.
fn isotonic_within_intervals(series: &[&PerPoint]) -> Result<(), String> {
    for pair in series.windows(2) {
        if pair[1].ci_high < pair[0].ci_low {
            return Err(format!(
                "significant decrease at MCS {} from grid {} (PER {:.3}) to {} (PER {:.3})",
                pair[0].mcs, pair[0].grid, pair[0].per, pair[1].grid, pair[1].per
            ));
        }
    }
    Ok(())
}

fn not_significantly_below(a: &PerPoint, b: &PerPoint) -> bool {
    // "a >= b modulo intervals".
    a.ci_high >= b.ci_low
}

// ---------------------------------------------------------------------------
// Criterion 6: PER vs JSR shape and MCS ordering
// ---------------------------------------------------------------------------

fn c6_per_vs_jsr() -> Result<String, String> {
    let t0 = Instant::now();
    let mut cfg = ExperimentConfig::default();
    cfg.out_dir = temp_out("c6");
    let points = run_per_vs_jsr(&cfg, 0).map_err(|e| e.to_string())?;

    for mcs in 0..8u8 {
        isotonic_within_intervals(&points_for(&points, mcs))?;
    }
    let at = |mcs: u8| -> Result<&PerPoint, String> {
        points
            .iter()
            .find(|p| p.mcs == mcs && p.grid == -10.0)
            .ok_or_else(|| "missing -10 dB point".to_string())
    };
    let (p7, p4, p0) = (at(7)?, at(4)?, at(0)?);
    if !not_significantly_below(p7, p4) || !not_significantly_below(p4, p0) {
        return Err(format!(
            "ordering violated at -10 dB: MCS7 {:.3}, MCS4 {:.3}, MCS0 {:.3}",
            p7.per, p4.per, p0.per
        ));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed > 600.0 {
        return Err(format!("took {elapsed:.0} s > 10 min"));
    }
    Ok(format!(
        "isotonic in JSR for all 8 MCS; at -10 dB PER(7)={:.3} >= PER(4)={:.3} >= PER(0)={:.3}",
        p7.per, p4.per, p0.per
    ))
}

// ---------------------------------------------------------------------------
// Criterion 7: toggle attack vs equal-power noise
// ---------------------------------------------------------------------------

fn c7_era_vs_noise() -> Result<String, String> {
    let t0 = Instant::now();
    let mut cfg = ExperimentConfig::default();
    cfg.mcs = vec![3, 4, 5, 6, 7];
    cfg.out_dir = temp_out("c7");
    let (era, noise) = run_era_vs_noise(&cfg, 0).map_err(|e| e.to_string())?;

    let mut margin_min = f64::INFINITY;
    for (e, n) in era.iter().zip(&noise) {
        assert_eq!((e.mcs, e.grid), (n.mcs, n.grid));
        if !not_significantly_below(e, n) {
            return Err(format!(
                "noise arm beats the toggle attack at MCS {} JSR {} dB: {:.3} vs {:.3}",
                e.mcs, e.grid, e.per, n.per
            ));
        }
        margin_min = margin_min.min(e.per - n.per);
    }
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed > 600.0 {
        return Err(format!("took {elapsed:.0} s > 10 min"));
    }
    Ok(format!(
        "toggle attack >= matched-power noise at all {} grid points (worst PER margin {margin_min:+.3})",
        era.len()
    ))
}

// ---------------------------------------------------------------------------
// Criterion 8: frequency plateau
// ---------------------------------------------------------------------------

fn c8_per_vs_freq() -> Result<String, String> {
    let t0 = Instant::now();
    let mut cfg = ExperimentConfig::default();
    cfg.mcs = vec![3, 5, 7];
    cfg.jsr_db = vec![-10.0];
    cfg.f_irs_hz = vec![250.0, 1e3, 4e3, 8e3, 16e3, 32e3, 64e3];
    cfg.out_dir = temp_out("c8");
    let points = run_per_vs_freq(&cfg, 0).map_err(|e| e.to_string())?;

    // The two highest frequencies toggle at least once per data portion.
    let data_t = cfg.ofdm.data_duration();
    for &f in &cfg.f_irs_hz[cfg.f_irs_hz.len() - 2..] {
        let hold = 0.5 / f;
        if hold > data_t {
            return Err(format!("{f} Hz holds longer than the data portion"));
        }
    }

    let mut plateau_msg = String::new();
    for &mcs in &cfg.mcs {
        let series = points_for(&points, mcs);
        isotonic_within_intervals(&series)?;
        let a = series[series.len() - 2];
        let b = series[series.len() - 1];
        let top = a.per.max(b.per);
        if top > 0.0 && (a.per - b.per).abs() > 0.2 * top {
            return Err(format!(
                "MCS {mcs}: plateau points differ {:.3} vs {:.3} (>20% relative)",
                a.per, b.per
            ));
        }
        plateau_msg.push_str(&format!(" MCS{mcs}:{:.3}/{:.3}", a.per, b.per));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed > 600.0 {
        return Err(format!("took {elapsed:.0} s > 10 min"));
    }
    Ok(format!(
        "monotone rise to plateau; top-two-frequency PERs agree within 20%:{plateau_msg}"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 9: greedy optimization behavior
// ---------------------------------------------------------------------------

fn normalized_magnitude(ch: &EraChannel, p: &IrsConfiguration) -> Vec<f64> {
    let h = ch.subcarrier_response(p).unwrap();
    let mut v: Vec<f64> = h.iter().map(|x| x.norm()).collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in &mut v {
        *x /= mean;
    }
    v
}

fn greedy_replay(
    ch: &EraChannel,
    n: usize,
    rounds: usize,
    rng: &mut RngStream,
) -> (IrsConfiguration, IrsConfiguration, f64) {
    let mut swept = IrsConfiguration::random(n, rng);
    let mut held = IrsConfiguration::random(n, rng);
    let mut last = csi_distance(
        &normalized_magnitude(ch, &swept),
        &normalized_magnitude(ch, &held),
    )
    .unwrap();
    for _ in 0..rounds {
        let reference = normalized_magnitude(ch, &held);
        for i in 0..n {
            let before = csi_distance(&reference, &normalized_magnitude(ch, &swept)).unwrap();
            swept.flip(i);
            let after = csi_distance(&reference, &normalized_magnitude(ch, &swept)).unwrap();
            if after > before {
                last = after;
            } else {
                swept.flip(i);
                last = before;
            }
        }
        std::mem::swap(&mut swept, &mut held);
    }
    let (p0, p1) = if rounds % 2 == 0 { (swept, held) } else { (held, swept) };
    (p0, p1, last)
}

fn c9_optimizer() -> Result<String, String> {
    let t0 = Instant::now();

    // (a) Monotone metric trace in 100/100 seeded noiseless runs, with
    // strict improvement over the initial pair in at least 99 of them.
    let mut strict_improvements = 0usize;
    for seed in 0..100u64 {
        let ch = EraChannel::randomized(&ChannelRealizationConfig::new(64, 24), 0x900 + seed)
            .calibrated_to_jsr(-6.0)
            .map_err(|e| e.to_string())?;
        let mut probe = MagnitudeProbe::noiseless(&ch);
        let mut rng = RngStream::new(seed, 0x9A);
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
                return Err(format!("seed {seed}: trace decreased {pair:?}"));
            }
        }
        if out.trace.last().copied().unwrap() > out.initial_distance {
            strict_improvements += 1;
        }
    }
    if strict_improvements < 99 {
        return Err(format!(
            "strict improvement in only {strict_improvements}/100 runs"
        ));
    }

    // (b) Exact agreement with an independent step replay on N=10, plus the
    // achieved fraction of the exhaustive optimum.
    let n = 10usize;
    let ch = EraChannel::randomized(
        &ChannelRealizationConfig::new(16, n),
        0x9B,
    )
    .calibrated_to_jsr(-3.0)
    .map_err(|e| e.to_string())?;
    let mut rng = RngStream::new(0x9C, 0);
    let mut replay_rng = rng.clone();
    let mut probe = MagnitudeProbe::noiseless(&ch);
    let out = optimize_patterns(
        &mut probe,
        n,
        &OptimizerSettings::default(),
        |a, b| csi_distance(a, b),
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let (p0, p1, replay_final) = greedy_replay(&ch, n, 2, &mut replay_rng);
    if out.pattern0 != p0 || out.pattern1 != p1 || out.trace.last() != Some(&replay_final) {
        return Err("greedy outcome differs from the independent replay".into());
    }
    if *out.trace.last().unwrap() < out.initial_distance {
        return Err("final distance below the initial distance".into());
    }

    let mut mags: Vec<Vec<f64>> = Vec::with_capacity(1 << n);
    for code in 0..(1usize << n) {
        let bits: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
        mags.push(normalized_magnitude(&ch, &IrsConfiguration::new(bits)));
    }
    let mut global_max = 0.0f64;
    for a in 0..mags.len() {
        for b in a + 1..mags.len() {
            global_max = global_max.max(csi_distance(&mags[a], &mags[b]).unwrap());
        }
    }
    let fraction = out.trace.last().unwrap() / global_max;

    // (c) Paired PER comparison: optimized pair vs all-'0'/'1' on the same
    // channel and trial streams, most robust MCS.
    let mut cfg = ExperimentConfig::default();
    cfg.out_dir = temp_out("c9");
    let demo = run_optimizer_demo(&cfg, 0).map_err(|e| e.to_string())?;
    if demo.per_optimized.per < demo.per_all01.per {
        return Err(format!(
            "optimized pair underperforms: {:.4} vs all-0/1 {:.4}",
            demo.per_optimized.per, demo.per_all01.per
        ));
    }

    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed > 300.0 {
        return Err(format!("took {elapsed:.0} s > 5 min"));
    }
    Ok(format!(
        "100/100 monotone traces ({strict_improvements} strictly improved); replay exact on N=10; greedy reaches {:.1}% of the exhaustive optimum; paired PER {:.4} (optimized) >= {:.4} (all-0/1) at MCS 0",
        fraction * 100.0,
        demo.per_optimized.per,
        demo.per_all01.per
    ))
}

// ---------------------------------------------------------------------------
// Criterion 10: baseline sanity
// ---------------------------------------------------------------------------

fn c10_baseline() -> Result<String, String> {
    let cfg = OfdmConfig::default();
    let base = EraChannel::randomized(&ChannelRealizationConfig::new(cfg.fft_size, 128), 7);
    let attacked = base.calibrated_to_jsr(-10.0).map_err(|e| e.to_string())?;
    let mut clean = base.clone();
    clean.irs_scale = 0.0;

    let mut rng = RngStream::new(0xB0, 0);
    let pattern = IrsConfiguration::random(128, &mut rng);
    let sched = IrsSchedule::static_pattern(pattern);
    let noise =
        era_core::ofdm::noise_variance_for_snr(base.direct_power(), cfg.fft_size, 50.0);

    let mut max_clean_per = 0.0f64;
    for mcs in McsProfile::all() {
        let path = [0xB1, mcs.index as u64];
        let with_irs = run_point(&cfg, &mcs, &attacked, &sched, noise, 0xB2, &path, 1000, 0.0)
            .map_err(|e| e.to_string())?;
        let no_irs = run_point(&cfg, &mcs, &clean, &sched, noise, 0xB2, &path, 1000, 0.0)
            .map_err(|e| e.to_string())?;
        if with_irs.errors != no_irs.errors {
            return Err(format!(
                "MCS {}: static surface changed the error count ({} vs {})",
                mcs.index, with_irs.errors, no_irs.errors
            ));
        }
        if no_irs.per > 0.001 {
            return Err(format!(
                "MCS {}: clean-channel PER {:.4} > 0.001 at 50 dB SNR",
                mcs.index, no_irs.per
            ));
        }
        max_clean_per = max_clean_per.max(no_irs.per);
    }
    Ok(format!(
        "static surface PER equals the no-attacker baseline exactly for all 8 MCS; clean PER <= {max_clean_per:.4}"
    ))
}

// ---------------------------------------------------------------------------
// Criterion 11: byte-identical reproducibility across thread counts
// ---------------------------------------------------------------------------

fn c11_determinism() -> Result<String, String> {
    let (report_a, ok_a) = selftest::run();
    let (report_b, ok_b) = selftest::run();
    if !ok_a || !ok_b {
        return Err("selftest reported failures".into());
    }
    if report_a != report_b {
        return Err("selftest output differs between runs".into());
    }

    let mut cfg = ExperimentConfig::default();
    cfg.mcs = vec![0, 7];
    cfg.jsr_db = vec![-10.0, -5.0];
    cfg.packets_per_point = 50;
    cfg.out_dir = temp_out("c11");

    let read = |name: &str| std::fs::read(cfg.out_dir.join(name)).map_err(|e| e.to_string());
    run_per_vs_jsr(&cfg, 1).map_err(|e| e.to_string())?;
    let csv_1 = read("per_vs_jsr.csv")?;
    let manifest_1 = read("run_manifest.json")?;
    run_per_vs_jsr(&cfg, 8).map_err(|e| e.to_string())?;
    let csv_8 = read("per_vs_jsr.csv")?;
    let manifest_8 = read("run_manifest.json")?;

    if csv_1 != csv_8 {
        return Err("sweep CSV differs between 1 and 8 threads".into());
    }
    if manifest_1 != manifest_8 {
        return Err("run manifest differs between 1 and 8 threads".into());
    }
    Ok(format!(
        "selftest ({} bytes) and sweep outputs ({} bytes CSV) byte-identical at 1 and 8 threads",
        report_a.len(),
        csv_1.len()
    ))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance_criteria() {
    type Check = (&'static str, fn() -> Result<String, String>);
    let criteria: &[Check] = &[
        ("surface-tap SIR identity", c1_sir_identity),
        ("ICI-matrix equivalence", c2_ici_equivalence),
        ("symbol-error exactness", c3_symbol_error_exactness),
        ("link-budget reference value", c4_link_budget),
        ("slow-toggle PER bound", c5_per_bound),
        ("PER-vs-JSR shape and ordering", c6_per_vs_jsr),
        ("toggle attack vs matched noise", c7_era_vs_noise),
        ("frequency plateau", c8_per_vs_freq),
        ("greedy optimizer behavior", c9_optimizer),
        ("baseline sanity", c10_baseline),
        ("cross-thread determinism", c11_determinism),
    ];

    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        match check() {
            Ok(msg) => println!(
                "PASS criterion {}: {name} — {msg} [{:.1}s]",
                i + 1,
                t0.elapsed().as_secs_f64()
            ),
            Err(msg) => {
                println!(
                    "FAIL criterion {}: {name} — {msg} [{:.1}s]",
                    i + 1,
                    t0.elapsed().as_secs_f64()
                );
                failures.push(i + 1);
            }
        }
    }

    // Best-effort cleanup of the temp output dirs.
    for tag in ["c6", "c7", "c8", "c9", "c11"] {
        let _ = std::fs::remove_dir_all(temp_out(tag));
    }

    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
