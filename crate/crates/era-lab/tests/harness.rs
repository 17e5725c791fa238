//! Harness-level behavior: trivial limits of each experiment, output file
//! contracts, and the CLI's exit codes and determinism.

use std::path::PathBuf;
use std::process::Command;

use era_lab::config::ExperimentConfig;
use era_lab::experiments::{
    matched_noise_variance, run_era_vs_noise, run_optimizer_demo, run_per_vs_freq,
    run_per_vs_jsr, run_surface_size,
};

use era_core::channel::EraChannel;

fn out_dir(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("era-harness-{}-{tag}", std::process::id()))
}

fn small_cfg(tag: &str) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.mcs = vec![0, 3];
    cfg.jsr_db = vec![-300.0, -10.0];
    cfg.packets_per_point = 20;
    cfg.channel.n_elements = 16;
    cfg.out_dir = out_dir(tag);
    cfg
}

#[test]
fn vanishing_jsr_recovers_clean_baseline() {
    // At -300 dB the surface contributes nothing measurable; at 50 dB SNR
    // the link is error-free.
    let cfg = small_cfg("jsr0");
    let points = run_per_vs_jsr(&cfg, 0).unwrap();
    for p in points.iter().filter(|p| p.grid == -300.0) {
        assert_eq!(p.errors, 0, "MCS {}", p.mcs);
    }
    let csv = std::fs::read_to_string(cfg.out_dir.join("per_vs_jsr.csv")).unwrap();
    assert!(csv.starts_with("mcs,jsr_db,packets,errors,per,ci_low,ci_high,seed\n"));
    assert!(cfg.out_dir.join("run_manifest.json").exists());
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

#[test]
fn era_vs_noise_both_negligible_at_very_low_jsr() {
    let mut cfg = small_cfg("evn");
    cfg.jsr_db = vec![-30.0];
    cfg.mcs = vec![3];
    let (era, noise) = run_era_vs_noise(&cfg, 0).unwrap();
    assert_eq!(era[0].errors, 0);
    assert_eq!(noise[0].errors, 0);

    // Matched power is a configured identity, not a sampled estimate.
    let ch = EraChannel::randomized(
        &cfg.channel.realization(cfg.ofdm.fft_size),
        cfg.channel_seed,
    )
    .calibrated_to_jsr(-30.0)
    .unwrap();
    let var = matched_noise_variance(&ch, &cfg.ofdm).unwrap();
    let expect = ch.irs_reference_power().unwrap()
        * era_lab::experiments::mean_tx_sample_power(&cfg.ofdm);
    assert!((var - expect).abs() <= 1e-6 * expect);
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

#[test]
fn near_static_modulation_recovers_baseline() {
    let mut cfg = small_cfg("freq0");
    cfg.mcs = vec![3];
    cfg.jsr_db = vec![-10.0];
    cfg.f_irs_hz = vec![1.0]; // hold 0.5 s vs 68 us packets
    cfg.packets_per_point = 50;
    let points = run_per_vs_freq(&cfg, 0).unwrap();
    assert_eq!(points[0].errors, 0);
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

#[test]
fn slow_toggling_respects_packet_error_bound() {
    // Pattern hold = 10 packet durations: PER can at most hit the
    // hold-duration bound, plus binomial slack.
    let mut cfg = small_cfg("bound");
    cfg.mcs = vec![7];
    cfg.jsr_db = vec![-10.0];
    cfg.packets_per_point = 200;
    let t_p = cfg.ofdm.packet_duration();
    let hold = 10.0 * t_p;
    cfg.f_irs_hz = vec![1.0 / (2.0 * hold)];
    let points = run_per_vs_freq(&cfg, 0).unwrap();

    let bound = era_core::analysis::per_upper_bound(t_p, hold).unwrap();
    let sigma = (bound * (1.0 - bound) / cfg.packets_per_point as f64).sqrt();
    assert!(
        points[0].per <= bound + 3.0 * sigma,
        "PER {} above bound {bound} + 3 sigma",
        points[0].per
    );
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

#[test]
fn surface_size_rows_are_monotone_in_attacker_distance() {
    let mut cfg = small_cfg("geo");
    cfg.geometry.d_ab_m = vec![10.0, 30.0];
    cfg.geometry.d_ae_m = vec![1.0, 2.0, 10.0, 20.0];
    let rows = run_surface_size(&cfg).unwrap();
    // Reference point: 30 m link, 10 m attacker distance.
    let reference = rows
        .iter()
        .find(|r| r.d_ab_m == 30.0 && r.d_ae_m == 10.0)
        .unwrap();
    assert!((reference.area_m2 - 0.19).abs() / 0.19 < 0.05);
    // Larger d_AE needs a larger surface at fixed d_AB.
    for d_ab in [10.0, 30.0] {
        let series: Vec<f64> = cfg
            .geometry
            .d_ae_m
            .iter()
            .map(|&dae| {
                rows.iter()
                    .find(|r| r.d_ab_m == d_ab && r.d_ae_m == dae)
                    .unwrap()
                    .area_m2
            })
            .collect();
        for pair in series.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

#[test]
fn optimizer_demo_writes_all_outputs() {
    let mut cfg = small_cfg("opt");
    cfg.channel.n_elements = 24;
    cfg.packets_per_point = 30;
    cfg.ofdm.fft_size = 64;
    cfg.ofdm.data_subcarriers = 48;
    cfg.ofdm.cp_len = 16;
    let demo = run_optimizer_demo(&cfg, 0).unwrap();
    for pair in demo.trace.windows(2) {
        assert!(pair[1] >= pair[0]);
    }
    for file in [
        "optimizer_trace.csv",
        "optimizer_csi.csv",
        "optimizer_per.csv",
        "optimizer_patterns.toml",
        "run_manifest.json",
    ] {
        assert!(cfg.out_dir.join(file).exists(), "{file}");
    }
    // Hex patterns in the export round-trip.
    let text = std::fs::read_to_string(cfg.out_dir.join("optimizer_patterns.toml")).unwrap();
    let table: toml::Table = text.parse().unwrap();
    let hex = table["optimized0"].as_str().unwrap();
    let parsed = era_core::attacker::IrsConfiguration::from_hex(hex, 24).unwrap();
    assert_eq!(parsed, demo.optimized0);
    let _ = std::fs::remove_dir_all(&cfg.out_dir);
}

// ---------------------------------------------------------------------------
// CLI contract
// ---------------------------------------------------------------------------

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_era-lab"))
}

#[test]
fn cli_selftest_passes() {
    let out = bin().arg("selftest").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS fft-roundtrip"));
    assert!(text.contains("0 failed"));
}

#[test]
fn cli_exit_codes() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["per-vs-jsr", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_rejects_bad_config_file() {
    let dir = out_dir("cli-badcfg");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("bad.toml");
    std::fs::write(&cfg_path, "unknown_key = 1\n").unwrap();
    let out = bin()
        .args(["per-vs-jsr", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cli_same_seed_gives_identical_csv() {
    let dir = out_dir("cli-det");
    let cfg_path = dir.join("cfg.toml");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        &cfg_path,
        "mcs = [0]\njsr_db = [-10.0]\npackets_per_point = 10\n[channel]\nn_elements = 8\n",
    )
    .unwrap();
    let run = |seed: &str| {
        let out = bin()
            .args([
                "per-vs-jsr",
                "--config",
                cfg_path.to_str().unwrap(),
                "--seed",
                seed,
                "--out",
                dir.join(format!("s{seed}")).to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.join(format!("s{seed}")).join("per_vs_jsr.csv")).unwrap()
    };
    let a = run("9");
    let b = run("9");
    assert_eq!(a, b);

    // The env var seeds the run when --seed is absent; the flag wins.
    let out = bin()
        .args([
            "per-vs-jsr",
            "--config",
            cfg_path.to_str().unwrap(),
            "--out",
            dir.join("env").to_str().unwrap(),
        ])
        .env("ERA_LAB_SEED", "9")
        .output()
        .unwrap();
    assert!(out.status.success());
    let c = std::fs::read(dir.join("env").join("per_vs_jsr.csv")).unwrap();
    assert_eq!(a, c);
    let _ = std::fs::remove_dir_all(&dir);
}
