//! Closed-form predictions for the attack's effect on one OFDM link:
//! equalizer symbol-error formulas, the intercarrier-interference coupling
//! matrix of a time-varying impulse response, interference power and
//! per-subcarrier SIR under surface modulation, and the slow-toggle
//! packet-error bound.

use num_complex::Complex64;
use thiserror::Error;

use crate::channel::Cir;
use crate::dsp::fft;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("reference channel gain is zero; the equalized error is undefined")]
    ZeroReference,
    #[error("durations must be positive (got {0})")]
    NonPositiveDuration(f64),
}

// ---------------------------------------------------------------------------
// Equalizer symbol error
// ---------------------------------------------------------------------------

/// Noise terms entering the exact symbol-error expression: `z` on the data
/// symbol, `z_tilde` on the channel estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTerms {
    pub z: Complex64,
    pub z_tilde: Complex64,
}

/// Error of a zero-forced symbol when the channel changed from `h0`
/// (at estimation time) to `h1` (at data time).
///
/// With noise terms the exact form
/// `e = (x (h1 - h0 - z~) + z) / (h0 + z~)` is evaluated; without them the
/// high-SNR form `e = x (h1 - h0) / h0`.
pub fn predicted_symbol_error(
    h0: Complex64,
    h1: Complex64,
    x: Complex64,
    noise: Option<NoiseTerms>,
) -> Result<Complex64, AnalysisError> {
    match noise {
        None => {
            if h0.norm() == 0.0 {
                return Err(AnalysisError::ZeroReference);
            }
            Ok(x * (h1 - h0) / h0)
        }
        Some(n) => {
            let denom = h0 + n.z_tilde;
            if denom.norm() == 0.0 {
                return Err(AnalysisError::ZeroReference);
            }
            Ok((x * (h1 - h0 - n.z_tilde) + n.z) / denom)
        }
    }
}

// ---------------------------------------------------------------------------
// ICI coupling matrix
// ---------------------------------------------------------------------------

/// Subcarrier coupling matrix `H_{k,k'}` of one OFDM symbol under a
/// time-varying impulse response.
///
/// For a time-invariant response the matrix is diagonal and the diagonal is
/// the response's frequency transform; channel variation inside the FFT
/// window moves energy onto the off-diagonals.
#[derive(Debug, Clone)]
pub struct IciMatrix {
    size: usize,
    /// Row-major `size x size`: `entries[k * size + k']`.
    entries: Vec<Complex64>,
}

impl IciMatrix {
    /// Builds the matrix from the impulse response at each of the `K`
    /// samples inside the FFT window (CP excluded).
    ///
    /// `H_{k,k'} = (1/K) sum_l H_l[k - k'] e^{-j2π l k' / K}` where
    /// `H_l[d]` is the DFT of tap `l` across the window samples.
    pub fn from_cir_window(window: &[Cir]) -> Self {
        let k_size = window.len();
        assert!(k_size.is_power_of_two(), "window must span the FFT size");
        let taps = window.iter().map(|c| c.len()).max().unwrap_or(1);

        // Per-tap DFT in the sample direction.
        let mut tap_dft: Vec<Vec<Complex64>> = Vec::with_capacity(taps);
        for l in 0..taps {
            let series: Vec<Complex64> = window
                .iter()
                .map(|c| c.taps.get(l).copied().unwrap_or_default())
                .collect();
            tap_dft.push(fft(&series).expect("window length is a power of two"));
        }

        let mut entries = vec![Complex64::new(0.0, 0.0); k_size * k_size];
        let scale = 1.0 / k_size as f64;
        for k in 0..k_size {
            for kp in 0..k_size {
                let d = (k + k_size - kp) % k_size;
                let mut acc = Complex64::new(0.0, 0.0);
                for (l, dft) in tap_dft.iter().enumerate() {
                    let phase =
                        -2.0 * std::f64::consts::PI * (l * kp % k_size) as f64 / k_size as f64;
                    acc += dft[d] * Complex64::from_polar(1.0, phase);
                }
                entries[k * k_size + kp] = acc * scale;
            }
        }
        Self {
            size: k_size,
            entries,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, k: usize, kp: usize) -> Complex64 {
        self.entries[k * self.size + kp]
    }

    /// Reconstructs the post-FFT received symbol: `Y_k = sum_k' H_{k,k'} X_k'`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.size);
        (0..self.size)
            .map(|k| {
                let row = &self.entries[k * self.size..(k + 1) * self.size];
                row.iter().zip(x).map(|(h, xv)| h * xv).sum()
            })
            .collect()
    }

    /// Off-diagonal power arriving on subcarrier `k`.
    pub fn ici_power(&self, k: usize) -> f64 {
        (0..self.size)
            .filter(|&kp| kp != k)
            .map(|kp| self.entry(k, kp).norm_sqr())
            .sum()
    }

    /// CSV export: `k,kp,re,im,mag` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,kp,re,im,mag\n");
        for k in 0..self.size {
            for kp in 0..self.size {
                let v = self.entry(k, kp);
                out.push_str(&format!(
                    "{k},{kp},{:.12e},{:.12e},{:.12e}\n",
                    v.re,
                    v.im,
                    v.norm()
                ));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Surface-induced interference power
// ---------------------------------------------------------------------------

/// Per-subcarrier signal/interference accounting for a modulated surface tap.
#[derive(Debug, Clone)]
pub struct SirReport {
    /// Direct-path signal power per subcarrier, `|d_k|^2`.
    pub s_k: Vec<f64>,
    /// Interference power from the surface tap (subcarrier-independent for a
    /// single tap).
    pub i_irs: f64,
    /// Mean power of the surface tap over the window.
    pub p_irs: f64,
    /// Whether the zero-mean, constant-magnitude closed form applied
    /// (`i_irs == p_irs`); otherwise `i_irs` comes from direct summation.
    pub closed_form: bool,
}

impl SirReport {
    pub fn sir_linear(&self, k: usize) -> f64 {
        self.s_k[k] / self.i_irs
    }

    pub fn sir_db(&self, k: usize) -> f64 {
        10.0 * self.sir_linear(k).log10()
    }

    /// CSV export: `k,s_k,i_irs,sir_db` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,s_k,i_irs,sir_db\n");
        for k in 0..self.s_k.len() {
            out.push_str(&format!(
                "{k},{:.12e},{:.12e},{:.6}\n",
                self.s_k[k],
                self.i_irs,
                self.sir_db(k)
            ));
        }
        out
    }
}

/// Tolerances for the closed-form preconditions.
const ZERO_MEAN_TOL: f64 = 1e-9;
const CONST_MAG_TOL: f64 = 1e-9;

/// Interference power induced by the surface tap's time series over one FFT
/// window, and the resulting per-subcarrier SIR against the direct gains.
///
/// Under phase-only modulation that averages to zero over the window, the
/// whole received surface power turns into intercarrier interference:
/// `I = |h|^2 = P_IRS`. Otherwise the off-diagonal sum is evaluated
/// directly and `closed_form` is false.
pub fn irs_ici_power(tap_window: &[Complex64], direct_gains: &[Complex64]) -> SirReport {
    let k_size = tap_window.len();
    assert!(k_size.is_power_of_two());
    let p_irs = tap_window.iter().map(|h| h.norm_sqr()).sum::<f64>() / k_size as f64;
    let mean = tap_window.iter().sum::<Complex64>() / k_size as f64;

    let rms = p_irs.sqrt();
    let constant_magnitude = tap_window
        .iter()
        .all(|h| (h.norm() - rms).abs() <= CONST_MAG_TOL * rms.max(1.0));
    let zero_mean = mean.norm() <= ZERO_MEAN_TOL * rms.max(1.0);

    let (i_irs, closed_form) = if constant_magnitude && zero_mean {
        (p_irs, true)
    } else {
        // Direct summation of the off-diagonal coupling power. For a single
        // tap this is independent of the row index k.
        let dft = fft(tap_window).expect("window length is a power of two");
        let total: f64 = dft.iter().map(|v| v.norm_sqr()).sum();
        let diag = dft[0].norm_sqr();
        ((total - diag) / (k_size * k_size) as f64, false)
    };

    SirReport {
        s_k: direct_gains.iter().map(|d| d.norm_sqr()).collect(),
        i_irs,
        p_irs,
        closed_form,
    }
}

// ---------------------------------------------------------------------------
// Slow-toggle packet-error bound
// ---------------------------------------------------------------------------

/// Upper bound on the packet error rate when each surface pattern is held
/// for `t_hold` seconds longer than the packet duration `t_packet`:
/// `min(1, t_packet / t_hold)`.
pub fn per_upper_bound(t_packet: f64, t_hold: f64) -> Result<f64, AnalysisError> {
    if !(t_packet > 0.0) {
        return Err(AnalysisError::NonPositiveDuration(t_packet));
    }
    if !(t_hold > 0.0) {
        return Err(AnalysisError::NonPositiveDuration(t_hold));
    }
    Ok((t_packet / t_hold).min(1.0))
}
