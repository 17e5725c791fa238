//! Greedy binary surface optimization.
//!
//! Starting from two random patterns, the attacker alternately holds one
//! pattern fixed, probes its magnitude CSI as a reference, and sweeps the
//! other pattern element by element, keeping each bit flip only when it
//! strictly increases the dissimilarity metric between the two responses.

use super::{AttackError, IrsConfiguration, IrsSchedule};
use crate::dsp::RngStream;

/// Source of magnitude CSI `|H_k|` for a given surface pattern.
pub trait ProbeOracle {
    fn probe(&mut self, pattern: &IrsConfiguration) -> Result<Vec<f64>, AttackError>;
}

impl<F> ProbeOracle for F
where
    F: FnMut(&IrsConfiguration) -> Vec<f64>,
{
    fn probe(&mut self, pattern: &IrsConfiguration) -> Result<Vec<f64>, AttackError> {
        Ok(self(pattern))
    }
}

/// Euclidean distance between two magnitude-CSI vectors.
pub fn csi_distance(a: &[f64], b: &[f64]) -> Result<f64, AttackError> {
    if a.len() != b.len() {
        return Err(AttackError::CsiLength(a.len(), b.len()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

#[derive(Debug, Clone)]
pub struct OptimizerSettings {
    /// Full optimization rounds; each round sweeps one pattern and then
    /// swaps roles.
    pub rounds: usize,
    /// Normalize each probed CSI vector to unit mean before the metric.
    pub normalize: bool,
    /// Average this many probe repetitions per CSI reading (noisy probes).
    pub probe_repeats: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            rounds: 2,
            normalize: true,
            probe_repeats: 1,
        }
    }
}

/// Result of the greedy optimization.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub pattern0: IrsConfiguration,
    pub pattern1: IrsConfiguration,
    /// Metric value after every element visit, `rounds * n` entries.
    pub trace: Vec<f64>,
    /// Metric value between the initial patterns.
    pub initial_distance: f64,
    /// Total number of probe requests (repetitions not counted).
    pub probe_count: usize,
}

impl OptimizeOutcome {
    /// Wraps the optimized pair into a toggle schedule.
    pub fn into_schedule(self, f_irs_hz: f64) -> IrsSchedule {
        IrsSchedule::new(self.pattern0, self.pattern1, f_irs_hz)
    }
}

fn normalize_mean(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len().max(1) as f64;
    if mean > 0.0 {
        for x in v.iter_mut() {
            *x /= mean;
        }
    }
}

/// Runs the greedy bit-flip optimization and returns the final pattern pair
/// together with the metric trace.
///
/// Each round issues `1 + 2n` probes: one for the held reference and two per
/// element of the swept pattern (before and after the flip). A flip survives
/// only when the metric strictly increases; ties revert.
pub fn optimize_patterns<P, M>(
    oracle: &mut P,
    n: usize,
    settings: &OptimizerSettings,
    metric: M,
    rng: &mut RngStream,
) -> Result<OptimizeOutcome, AttackError>
where
    P: ProbeOracle,
    M: Fn(&[f64], &[f64]) -> Result<f64, AttackError>,
{
    assert!(n >= 1, "surface needs at least one element");
    assert!(settings.probe_repeats >= 1);

    let mut swept = IrsConfiguration::random(n, rng);
    let mut held = IrsConfiguration::random(n, rng);
    let mut probe_count = 0usize;

    let read = |oracle: &mut P, pattern: &IrsConfiguration, count: &mut usize| {
        let mut acc: Option<Vec<f64>> = None;
        for _ in 0..settings.probe_repeats {
            let sample = oracle.probe(pattern)?;
            match &mut acc {
                None => acc = Some(sample),
                Some(v) => {
                    if v.len() != sample.len() {
                        return Err(AttackError::CsiLength(v.len(), sample.len()));
                    }
                    for (a, s) in v.iter_mut().zip(&sample) {
                        *a += s;
                    }
                }
            }
        }
        *count += 1;
        let mut v = acc.expect("probe_repeats >= 1");
        let scale = 1.0 / settings.probe_repeats as f64;
        for x in v.iter_mut() {
            *x *= scale;
        }
        if settings.normalize {
            normalize_mean(&mut v);
        }
        Ok(v)
    };

    let initial_distance = {
        let a = read(oracle, &swept, &mut probe_count)?;
        let b = read(oracle, &held, &mut probe_count)?;
        metric(&a, &b)?
    };
    // The two bootstrap probes are not part of the per-round accounting.
    probe_count = 0;

    let mut trace = Vec::with_capacity(settings.rounds * n);
    for _round in 0..settings.rounds {
        let reference = read(oracle, &held, &mut probe_count)?;
        for i in 0..n {
            let before = read(oracle, &swept, &mut probe_count)?;
            let d_before = metric(&reference, &before)?;
            swept.flip(i);
            let after = read(oracle, &swept, &mut probe_count)?;
            let d_after = metric(&reference, &after)?;
            if d_after > d_before {
                trace.push(d_after);
            } else {
                swept.flip(i);
                trace.push(d_before);
            }
        }
        std::mem::swap(&mut swept, &mut held);
    }

    // After an even number of swaps the original roles are restored; after
    // an odd number the names are swapped back here so pattern0 is always
    // the one optimized first.
    let (pattern0, pattern1) = if settings.rounds % 2 == 0 {
        (swept, held)
    } else {
        (held, swept)
    };

    Ok(OptimizeOutcome {
        pattern0,
        pattern1,
        trace,
        initial_distance,
        probe_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_basics() {
        assert_eq!(csi_distance(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert!((csi_distance(&[3.0, 0.0], &[0.0, 4.0]).unwrap() - 5.0).abs() < 1e-15);
        assert!(matches!(
            csi_distance(&[1.0], &[1.0, 2.0]),
            Err(AttackError::CsiLength(1, 2))
        ));
    }

    #[test]
    fn distance_matches_direct_summation() {
        let mut rng = RngStream::new(8, 8);
        for _ in 0..20 {
            let a: Vec<f64> = (0..64).map(|_| rng.next_f64()).collect();
            let b: Vec<f64> = (0..64).map(|_| rng.next_f64()).collect();
            let mut acc = 0.0;
            for k in 0..64 {
                acc += (a[k] - b[k]).powi(2);
            }
            assert!((csi_distance(&a, &b).unwrap() - acc.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_channel_leaves_patterns_unchanged() {
        // Both states produce identical CSI: no strict improvement exists.
        let mut oracle = |_p: &IrsConfiguration| vec![1.0; 16];
        let mut rng = RngStream::new(77, 0);
        let mut init_rng = rng.clone();
        let init0 = IrsConfiguration::random(1, &mut init_rng);
        let init1 = IrsConfiguration::random(1, &mut init_rng);
        let out = optimize_patterns(
            &mut oracle,
            1,
            &OptimizerSettings::default(),
            |a, b| csi_distance(a, b),
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.pattern0, init0);
        assert_eq!(out.pattern1, init1);
        assert!(out.trace.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn probe_count_per_round() {
        let n = 12;
        let mut oracle = |p: &IrsConfiguration| {
            (0..8).map(|k| 1.0 + p.reflection(k % n) * 0.1 * k as f64).collect()
        };
        let mut rng = RngStream::new(5, 5);
        let settings = OptimizerSettings {
            rounds: 3,
            ..Default::default()
        };
        let out = optimize_patterns(&mut oracle, n, &settings, |a, b| csi_distance(a, b), &mut rng)
            .unwrap();
        assert_eq!(out.probe_count, settings.rounds * (1 + 2 * n));
        assert_eq!(out.trace.len(), settings.rounds * n);
    }

    #[test]
    fn noiseless_trace_is_monotone() {
        let n = 16;
        // A deterministic frequency-selective toy response.
        let mut oracle = |p: &IrsConfiguration| {
            (0..32)
                .map(|k| {
                    let mut h = 1.0;
                    for i in 0..n {
                        h += p.reflection(i) * ((k * (i + 3)) as f64 * 0.37).sin() * 0.05;
                    }
                    h.abs()
                })
                .collect::<Vec<f64>>()
        };
        let mut rng = RngStream::new(907, 1);
        let out = optimize_patterns(
            &mut oracle,
            n,
            &OptimizerSettings::default(),
            |a, b| csi_distance(a, b),
            &mut rng,
        )
        .unwrap();
        for pair in out.trace.windows(2) {
            assert!(pair[1] >= pair[0], "trace decreased: {pair:?}");
        }
        assert!(*out.trace.last().unwrap() >= out.initial_distance);
    }
}
