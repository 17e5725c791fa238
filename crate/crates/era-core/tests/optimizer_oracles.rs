//! Oracles for the greedy pattern optimizer: an independent step-by-step
//! replay of the algorithm, and an exhaustive search over all pattern pairs
//! on a small surface.

use era_core::attacker::{
    csi_distance, optimize_patterns, IrsConfiguration, OptimizerSettings,
};
use era_core::channel::{ChannelRealizationConfig, EraChannel, MagnitudeProbe};
use era_core::dsp::RngStream;

fn normalized_magnitude(ch: &EraChannel, p: &IrsConfiguration) -> Vec<f64> {
    let h = ch.subcarrier_response(p).unwrap();
    let mut v: Vec<f64> = h.iter().map(|x| x.norm()).collect();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    for x in &mut v {
        *x /= mean;
    }
    v
}

/// Replays the greedy algorithm directly against the channel, independent of
/// the optimizer implementation: same initial draws, same visit order, same
/// strict-improvement rule.
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

#[test]
fn optimizer_matches_independent_replay_exactly() {
    let cfg = ChannelRealizationConfig {
        fft_size: 16,
        element_dispersion: 0.0,
        ..ChannelRealizationConfig::new(16, 10)
    };
    for seed in 0..20u64 {
        let ch = EraChannel::randomized(&cfg, seed).calibrated_to_jsr(-3.0).unwrap();
        let mut rng = RngStream::new(1000 + seed, 0);
        let mut replay_rng = rng.clone();

        let mut probe = MagnitudeProbe::noiseless(&ch);
        let out = optimize_patterns(
            &mut probe,
            10,
            &OptimizerSettings::default(),
            |a, b| csi_distance(a, b),
            &mut rng,
        )
        .unwrap();

        let (p0, p1, final_distance) = greedy_replay(&ch, 10, 2, &mut replay_rng);
        assert_eq!(out.pattern0, p0, "seed {seed}");
        assert_eq!(out.pattern1, p1, "seed {seed}");
        let got = out.trace.last().copied().unwrap();
        assert_eq!(got, final_distance, "seed {seed}");
        assert!(got >= out.initial_distance, "seed {seed}");
    }
}

#[test]
fn greedy_result_against_exhaustive_optimum() {
    // All 2^10 x 2^10 pattern pairs on a 10-element surface.
    let n = 10usize;
    let cfg = ChannelRealizationConfig {
        fft_size: 16,
        element_dispersion: 0.0,
        ..ChannelRealizationConfig::new(16, n)
    };
    let ch = EraChannel::randomized(&cfg, 424).calibrated_to_jsr(-3.0).unwrap();

    let mut mags: Vec<Vec<f64>> = Vec::with_capacity(1 << n);
    for code in 0..(1usize << n) {
        let bits: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
        mags.push(normalized_magnitude(&ch, &IrsConfiguration::new(bits)));
    }
    let mut global_max = 0.0f64;
    for a in 0..mags.len() {
        for b in a + 1..mags.len() {
            let d = csi_distance(&mags[a], &mags[b]).unwrap();
            if d > global_max {
                global_max = d;
            }
        }
    }

    let mut rng = RngStream::new(77, 0);
    let mut probe = MagnitudeProbe::noiseless(&ch);
    let out = optimize_patterns(
        &mut probe,
        n,
        &OptimizerSettings::default(),
        |a, b| csi_distance(a, b),
        &mut rng,
    )
    .unwrap();
    let achieved = out.trace.last().copied().unwrap();
    let fraction = achieved / global_max;
    println!("greedy achieved {achieved:.6}, global optimum {global_max:.6}, fraction {fraction:.4}");
    assert!(achieved > out.initial_distance);
    assert!(fraction <= 1.0 + 1e-12);
    assert!(fraction > 0.3, "greedy should land in the optimum's ballpark");
}

#[test]
fn monotone_trace_on_simulated_channels() {
    let cfg = ChannelRealizationConfig {
        fft_size: 64,
        element_dispersion: 1.0,
        ..ChannelRealizationConfig::new(64, 24)
    };
    for seed in 0..10u64 {
        let ch = EraChannel::randomized(&cfg, 300 + seed).calibrated_to_jsr(-6.0).unwrap();
        let mut rng = RngStream::new(seed, 3);
        let mut probe = MagnitudeProbe::noiseless(&ch);
        let out = optimize_patterns(
            &mut probe,
            24,
            &OptimizerSettings::default(),
            |a, b| csi_distance(a, b),
            &mut rng,
        )
        .unwrap();
        for pair in out.trace.windows(2) {
            assert!(pair[1] >= pair[0], "seed {seed}: {pair:?}");
        }
        assert_eq!(out.probe_count, 2 * (1 + 2 * 24));
    }
}

#[test]
fn noisy_probes_average_repetitions() {
    let cfg = ChannelRealizationConfig::new(32, 8);
    let ch = EraChannel::randomized(&cfg, 5).calibrated_to_jsr(-6.0).unwrap();
    let mut probe = MagnitudeProbe::noisy(&ch, 10.0, RngStream::new(6, 6));
    let settings = OptimizerSettings {
        probe_repeats: 4,
        ..Default::default()
    };
    let mut rng = RngStream::new(7, 7);
    let out = optimize_patterns(&mut probe, 8, &settings, |a, b| csi_distance(a, b), &mut rng)
        .unwrap();
    // Under probe noise the trace need not be monotone; the run just has to
    // complete with the right shape.
    assert_eq!(out.trace.len(), 2 * 8);
}
