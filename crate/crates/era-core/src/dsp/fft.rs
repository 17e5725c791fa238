//! Radix-2 iterative FFT.
//!
//! Convention: the forward transform is unnormalized, the inverse carries the
//! full 1/K factor, so `ifft(fft(x)) == x`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::DspError;

fn radix2_in_place(data: &mut [Complex64], inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }

    // Bit-reversal permutation.
    let shift = (n - 1).leading_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> shift;
        if i < j {
            data.swap(i, j);
        }
    }

    let sign = if inverse { 1.0 } else { -1.0 };
    let mut m = 2;
    while m <= n {
        let step = sign * 2.0 * PI / m as f64;
        let w_m = Complex64::from_polar(1.0, step);
        for chunk in data.chunks_exact_mut(m) {
            let mut w = Complex64::new(1.0, 0.0);
            let half = m / 2;
            for k in 0..half {
                let t = w * chunk[k + half];
                let u = chunk[k];
                chunk[k] = u + t;
                chunk[k + half] = u - t;
                w *= w_m;
            }
        }
        m <<= 1;
    }
}

/// Unnormalized forward transform: `X[k] = sum_m x[m] e^{-j2πkm/K}`.
pub fn fft(x: &[Complex64]) -> Result<Vec<Complex64>, DspError> {
    if !x.len().is_power_of_two() || x.is_empty() {
        return Err(DspError::NonPowerOfTwoLength(x.len()));
    }
    let mut out = x.to_vec();
    radix2_in_place(&mut out, false);
    Ok(out)
}

/// Inverse transform with 1/K scaling: `x[m] = (1/K) sum_k X[k] e^{+j2πkm/K}`.
pub fn ifft(spectrum: &[Complex64]) -> Result<Vec<Complex64>, DspError> {
    if !spectrum.len().is_power_of_two() || spectrum.is_empty() {
        return Err(DspError::NonPowerOfTwoLength(spectrum.len()));
    }
    let mut out = spectrum.to_vec();
    radix2_in_place(&mut out, true);
    let scale = 1.0 / out.len() as f64;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

/// O(K²) reference DFT with the same convention as [`fft`]. Kept public so
/// tests and self-checks can cross-validate the fast path.
pub fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &xm) in x.iter().enumerate() {
                let phase = -2.0 * PI * (k * m % n) as f64 / n as f64;
                acc += xm * Complex64::from_polar(1.0, phase);
            }
            acc
        })
        .collect()
}
