//! Command-line interface.
//!
//! Exit codes: 0 success, 2 configuration/usage error, 1 runtime failure.

use std::path::PathBuf;

use crate::config::ExperimentConfig;
use crate::{experiments, selftest, HarnessError};

const USAGE: &str = "\
era-lab — surface-toggling jamming experiments over a simulated OFDM link

USAGE:
  era-lab <SUBCOMMAND> [FLAGS]

SUBCOMMANDS:
  per-vs-jsr     Packet error rate over the jamming-to-signal ratio grid
  era-vs-noise   Toggle attack vs equal-power noise jamming, paired sweeps
  per-vs-freq    Packet error rate over the surface modulation frequency
  surface-size   Minimum surface area vs link distance (free space)
  optimize       Greedy pattern optimization demo + paired PER comparison
  ici-check      Interference-model consistency checks, SIR report CSV
  selftest       Module invariant suite with PASS/FAIL summary

FLAGS:
  --config <file>   TOML experiment config (unknown keys rejected)
  --seed <u64>      Master seed (overrides config and ERA_LAB_SEED)
  --out <dir>       Output directory (overrides config)
  --threads <n>     Worker threads (0 = all cores); results do not depend on it
  --packets <n>     Packets per grid point (overrides config)
  --help            This text

ENVIRONMENT:
  ERA_LAB_SEED      Fallback master seed when --seed is absent

Each run writes its CSV outputs plus run_manifest.json into the output
directory. Identical (config, seed) produce byte-identical outputs at any
thread count.
";

#[derive(Debug, Clone, PartialEq)]
enum Command {
    PerVsJsr,
    EraVsNoise,
    PerVsFreq,
    SurfaceSize,
    Optimize,
    IciCheck,
    Selftest,
}

#[derive(Debug)]
struct Invocation {
    command: Command,
    config_path: Option<PathBuf>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    threads: usize,
    packets: Option<usize>,
}

fn parse(args: &[String]) -> Result<Invocation, String> {
    let mut it = args.iter();
    let sub = it.next().ok_or("missing subcommand")?;
    let command = match sub.as_str() {
        "per-vs-jsr" => Command::PerVsJsr,
        "era-vs-noise" => Command::EraVsNoise,
        "per-vs-freq" => Command::PerVsFreq,
        "surface-size" => Command::SurfaceSize,
        "optimize" => Command::Optimize,
        "ici-check" => Command::IciCheck,
        "selftest" => Command::Selftest,
        "--help" | "-h" | "help" => return Err(String::new()),
        other => return Err(format!("unknown subcommand '{other}'")),
    };

    let mut inv = Invocation {
        command,
        config_path: None,
        seed: None,
        out: None,
        threads: 0,
        packets: None,
    };
    while let Some(flag) = it.next() {
        let mut value = |name: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| format!("missing value for {name}"))
        };
        match flag.as_str() {
            "--config" => inv.config_path = Some(PathBuf::from(value("--config")?)),
            "--seed" => {
                inv.seed = Some(
                    value("--seed")?
                        .parse::<u64>()
                        .map_err(|_| "invalid --seed (expected u64)".to_string())?,
                )
            }
            "--out" => inv.out = Some(PathBuf::from(value("--out")?)),
            "--threads" => {
                inv.threads = value("--threads")?
                    .parse::<usize>()
                    .map_err(|_| "invalid --threads (expected integer)".to_string())?
            }
            "--packets" => {
                let n = value("--packets")?
                    .parse::<usize>()
                    .map_err(|_| "invalid --packets (expected integer)".to_string())?;
                if n == 0 {
                    return Err("--packets must be >= 1".to_string());
                }
                inv.packets = Some(n);
            }
            "--help" | "-h" => return Err(String::new()),
            other => return Err(format!("unknown flag '{other}'")),
        }
    }
    Ok(inv)
}

fn effective_config(inv: &Invocation) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &inv.config_path {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let mut cfg = ExperimentConfig::default();
            if inv.command == Command::PerVsFreq {
                // Frequency sweep defaults: fixed -10 dB, log-spaced grid.
                cfg.jsr_db = vec![-10.0];
                cfg.f_irs_hz = vec![250.0, 1e3, 4e3, 8e3, 16e3, 32e3, 64e3];
            }
            cfg
        }
    };
    if inv.seed.is_none() {
        if let Ok(env_seed) = std::env::var("ERA_LAB_SEED") {
            cfg.master_seed = env_seed
                .parse::<u64>()
                .map_err(|_| HarnessError::Config("ERA_LAB_SEED must be a u64".into()))?;
        }
    }
    if let Some(seed) = inv.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &inv.out {
        cfg.out_dir = out.clone();
    }
    if let Some(packets) = inv.packets {
        cfg.packets_per_point = packets;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(inv: &Invocation) -> Result<(), HarnessError> {
    if inv.command == Command::Selftest {
        let (report, ok) = selftest::run();
        print!("{report}");
        return if ok {
            Ok(())
        } else {
            Err(HarnessError::Runtime("selftest failures".into()))
        };
    }

    let cfg = effective_config(inv)?;
    match inv.command {
        Command::PerVsJsr => {
            let points = experiments::run_per_vs_jsr(&cfg, inv.threads)?;
            println!(
                "per-vs-jsr: {} points -> {}",
                points.len(),
                cfg.out_dir.join("per_vs_jsr.csv").display()
            );
        }
        Command::EraVsNoise => {
            let (era, noise) = experiments::run_era_vs_noise(&cfg, inv.threads)?;
            println!(
                "era-vs-noise: {} paired points -> {}",
                era.len() + noise.len(),
                cfg.out_dir.join("era_vs_noise.csv").display()
            );
        }
        Command::PerVsFreq => {
            let points = experiments::run_per_vs_freq(&cfg, inv.threads)?;
            println!(
                "per-vs-freq: {} points -> {}",
                points.len(),
                cfg.out_dir.join("per_vs_freq.csv").display()
            );
        }
        Command::SurfaceSize => {
            let rows = experiments::run_surface_size(&cfg)?;
            println!(
                "surface-size: {} rows -> {}",
                rows.len(),
                cfg.out_dir.join("surface_size.csv").display()
            );
        }
        Command::Optimize => {
            let demo = experiments::run_optimizer_demo(&cfg, inv.threads)?;
            println!(
                "optimize: distance {:.6} -> {:.6}; PER all01 {:.4} vs optimized {:.4} -> {}",
                demo.initial_distance,
                demo.trace.last().copied().unwrap_or(demo.initial_distance),
                demo.per_all01.per,
                demo.per_optimized.per,
                cfg.out_dir.join("optimizer_per.csv").display()
            );
        }
        Command::IciCheck => {
            if !experiments::run_ici_check(&cfg)? {
                return Err(HarnessError::Runtime("ici-check failed".into()));
            }
        }
        Command::Selftest => unreachable!(),
    }
    Ok(())
}

/// Parses and runs; returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let inv = match parse(&args) {
        Ok(inv) => inv,
        Err(msg) => {
            if msg.is_empty() {
                println!("{USAGE}");
                return 0;
            }
            eprintln!("error: {msg}\n\n{USAGE}");
            return 2;
        }
    };
    match execute(&inv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
