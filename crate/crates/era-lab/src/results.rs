//! Result records, confidence intervals, CSV output, and the run manifest.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// One Monte-Carlo grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerPoint {
    pub mcs: u8,
    /// Grid coordinate: JSR in dB or modulation frequency in Hz, depending
    /// on the experiment.
    pub grid: f64,
    pub packets: u64,
    pub errors: u64,
    pub per: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// Stream id of the point's first trial; enough to reproduce the point.
    pub seed: u64,
}

impl PerPoint {
    pub fn new(mcs: u8, grid: f64, packets: u64, errors: u64, seed: u64) -> Self {
        let per = errors as f64 / packets as f64;
        let (ci_low, ci_high) = wilson_interval(errors, packets);
        Self {
            mcs,
            grid,
            packets,
            errors,
            per,
            ci_low,
            ci_high,
            seed,
        }
    }

    /// True when this point's PER is not significantly above `other`'s
    /// (interval overlap test).
    pub fn not_significantly_above(&self, other: &PerPoint) -> bool {
        self.ci_low <= other.ci_high
    }
}

/// Wilson 95% score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.96f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Renders PER points as CSV with a fixed schema. `grid_column` names the
/// second column (`jsr_db` or `f_irs_hz`). An optional leading `mode`
/// column distinguishes paired sweeps.
pub fn per_points_csv(grid_column: &str, points: &[(Option<&str>, &PerPoint)]) -> String {
    let mut out = String::new();
    let has_mode = points.iter().any(|(m, _)| m.is_some());
    if has_mode {
        out.push_str("mode,");
    }
    let _ = writeln!(
        out,
        "mcs,{grid_column},packets,errors,per,ci_low,ci_high,seed"
    );
    for (mode, p) in points {
        if has_mode {
            let _ = write!(out, "{},", mode.unwrap_or(""));
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6},{:.6},{:.6},{}",
            p.mcs, p.grid, p.packets, p.errors, p.per, p.ci_low, p.ci_high, p.seed
        );
    }
    out
}

/// FNV-1a over the canonical config text; stamped into the manifest so two
/// runs can be compared for input identity.
pub fn content_hash(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    master_seed: u64,
    channel_seed: u64,
    config_hash: String,
    config: &'a ExperimentConfig,
}

/// Writes `<name>.csv` files plus a JSON manifest echoing the configuration.
pub struct RunWriter<'a> {
    dir: std::path::PathBuf,
    experiment: &'a str,
    cfg: &'a ExperimentConfig,
}

impl<'a> RunWriter<'a> {
    pub fn new(dir: &Path, experiment: &'a str, cfg: &'a ExperimentConfig) -> Result<Self, HarnessError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            experiment,
            cfg,
        })
    }

    pub fn write_text(&self, file: &str, text: &str) -> Result<(), HarnessError> {
        let path = self.dir.join(file);
        std::fs::write(&path, text).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
    }

    pub fn write_manifest(&self) -> Result<(), HarnessError> {
        let canonical = toml::to_string(self.cfg).expect("config serializes");
        let manifest = Manifest {
            experiment: self.experiment,
            master_seed: self.cfg.master_seed,
            channel_seed: self.cfg.channel_seed,
            config_hash: format!("{:016x}", content_hash(&canonical)),
            config: self.cfg,
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        self.write_text("run_manifest.json", &json)
    }
}
