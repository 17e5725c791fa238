//! Browser bindings for three interactive views: the surface-size curve,
//! per-subcarrier channel responses under a pattern pair, and the greedy
//! pattern optimization trace.
//!
//! Build with `wasm-pack build crates/era-wasm --target web` and open
//! `crates/era-wasm/www/index.html` from a static file server. Every
//! function returns a JSON string so the page needs no generated glue
//! beyond the wasm-bindgen loader.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use era_core::attacker::{csi_distance, optimize_patterns, IrsConfiguration, OptimizerSettings};
use era_core::channel::{
    required_surface_area, ChannelRealizationConfig, EraChannel, LinkGeometry, MagnitudeProbe,
};
use era_core::dsp::RngStream;

fn err_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Minimum surface area (m²) against link distance for one attacker
/// distance, perpendicular geometry, free space.
///
/// Returns `{"d_ab": [...], "area_m2": [...]}`.
#[wasm_bindgen]
pub fn surface_size_curve(d_ae_m: f64, jsr_db: f64, freq_ghz: f64, d_ab_max_m: f64) -> String {
    let jsr = 10f64.powf(jsr_db / 10.0);
    let steps = 120usize;
    let mut d_ab = Vec::with_capacity(steps);
    let mut area = Vec::with_capacity(steps);
    for i in 1..=steps {
        let d = d_ab_max_m * i as f64 / steps as f64;
        let g = LinkGeometry::perpendicular(d, d_ae_m, freq_ghz * 1e9);
        match required_surface_area(&g, jsr) {
            Ok(a) => {
                d_ab.push(d);
                area.push(a);
            }
            Err(e) => return err_json(e),
        }
    }
    json!({ "d_ab": d_ab, "area_m2": area }).to_string()
}

fn demo_channel(seed: u64, n_elements: usize, jsr_db: f64) -> Result<EraChannel, String> {
    if n_elements == 0 || n_elements > 1024 {
        return Err("element count must be in 1..=1024".into());
    }
    let cfg = ChannelRealizationConfig::new(128, n_elements);
    EraChannel::randomized(&cfg, seed)
        .calibrated_to_jsr(jsr_db)
        .map_err(|e| e.to_string())
}

/// Magnitude channel responses `|H_k|` for two surface patterns given as
/// hex strings (empty strings mean all-'0' / all-'1').
///
/// Returns `{"h0": [...], "h1": [...], "direct": [...]}`.
#[wasm_bindgen]
pub fn channel_response(
    seed: u64,
    n_elements: usize,
    jsr_db: f64,
    pattern0_hex: &str,
    pattern1_hex: &str,
) -> String {
    let ch = match demo_channel(seed, n_elements, jsr_db) {
        Ok(ch) => ch,
        Err(e) => return err_json(e),
    };
    let parse = |hex: &str, fallback: IrsConfiguration| {
        if hex.trim().is_empty() {
            Ok(fallback)
        } else {
            IrsConfiguration::from_hex(hex.trim(), n_elements)
        }
    };
    let p0 = match parse(pattern0_hex, IrsConfiguration::all_zeros(n_elements)) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let p1 = match parse(pattern1_hex, IrsConfiguration::all_ones(n_elements)) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let mags = |p: &IrsConfiguration| -> Result<Vec<f64>, String> {
        Ok(ch
            .subcarrier_response(p)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|h| h.norm())
            .collect())
    };
    let direct: Vec<f64> = match ch.direct_response() {
        Ok(d) => d.iter().map(|v| v.norm()).collect(),
        Err(e) => return err_json(e),
    };
    match (mags(&p0), mags(&p1)) {
        (Ok(h0), Ok(h1)) => json!({ "h0": h0, "h1": h1, "direct": direct }).to_string(),
        (Err(e), _) | (_, Err(e)) => err_json(e),
    }
}

/// Runs the greedy pattern optimization on a fresh random channel and
/// reports the distance trace plus before/after responses.
///
/// Returns `{"trace": [...], "before0": [...], "before1": [...],
/// "after0": [...], "after1": [...], "pattern0": "0x..", "pattern1": "0x..",
/// "initial_distance": x}`.
#[wasm_bindgen]
pub fn optimize_demo(seed: u64, n_elements: usize, jsr_db: f64, rounds: usize) -> String {
    let ch = match demo_channel(seed, n_elements, jsr_db) {
        Ok(ch) => ch,
        Err(e) => return err_json(e),
    };
    if rounds == 0 || rounds > 8 {
        return err_json("rounds must be in 1..=8");
    }
    let mut rng = RngStream::from_path(seed, &[0xDE60]);
    let mut init_rng = rng.clone();
    let init0 = IrsConfiguration::random(n_elements, &mut init_rng);
    let init1 = IrsConfiguration::random(n_elements, &mut init_rng);

    let settings = OptimizerSettings {
        rounds,
        ..Default::default()
    };
    let mut probe = MagnitudeProbe::noiseless(&ch);
    let outcome = match optimize_patterns(&mut probe, n_elements, &settings, |a, b| {
        csi_distance(a, b)
    }, &mut rng)
    {
        Ok(o) => o,
        Err(e) => return err_json(e),
    };

    let mags = |p: &IrsConfiguration| -> Vec<f64> {
        ch.subcarrier_response(p)
            .map(|h| h.iter().map(|v| v.norm()).collect())
            .unwrap_or_default()
    };
    json!({
        "trace": outcome.trace,
        "initial_distance": outcome.initial_distance,
        "before0": mags(&init0),
        "before1": mags(&init1),
        "after0": mags(&outcome.pattern0),
        "after1": mags(&outcome.pattern1),
        "pattern0": outcome.pattern0.to_hex(),
        "pattern1": outcome.pattern1.to_hex(),
    })
    .to_string()
}
