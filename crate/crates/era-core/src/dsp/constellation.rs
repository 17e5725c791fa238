//! Gray-coded constellations with unit average energy.
//!
//! Bit convention (fixed for this project): bits are MSB-first per symbol,
//! the first half of the group selects the in-phase level and the second half
//! the quadrature level. A `0` bit group maps to the most positive level, so
//! BPSK sends bit 0 as `+1` and QPSK sends `00` as `(1+j)/sqrt(2)`.

use num_complex::Complex64;

use super::DspError;

fn gray(v: usize) -> usize {
    v ^ (v >> 1)
}

/// A Gray-labeled square constellation of order 2, 4, 16, or 64.
#[derive(Debug, Clone)]
pub struct Constellation {
    order: usize,
    bits_per_symbol: usize,
    axis_bits: usize,
    scale: f64,
    /// Point for each bit label (label = bits interpreted MSB-first).
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(order: usize) -> Result<Self, DspError> {
        let bits_per_symbol = match order {
            2 => 1,
            4 => 2,
            16 => 4,
            64 => 6,
            _ => return Err(DspError::BadOrder(order)),
        };
        // BPSK uses the I axis only; QAM splits bits evenly across I/Q.
        let axis_bits = if order == 2 { 1 } else { bits_per_symbol / 2 };
        let levels = 1usize << axis_bits;
        let max_level = (levels - 1) as f64;

        let mut axis_level = vec![0.0; levels];
        for v in 0..levels {
            axis_level[gray(v)] = max_level - 2.0 * v as f64;
        }

        let axis_mean_sq: f64 =
            axis_level.iter().map(|l| l * l).sum::<f64>() / levels as f64;
        let dims = if order == 2 { 1.0 } else { 2.0 };
        let scale = 1.0 / (dims * axis_mean_sq).sqrt();

        let mut points = vec![Complex64::new(0.0, 0.0); order];
        for (label, p) in points.iter_mut().enumerate() {
            *p = if order == 2 {
                Complex64::new(scale * axis_level[label], 0.0)
            } else {
                let gi = label >> axis_bits;
                let gq = label & (levels - 1);
                Complex64::new(scale * axis_level[gi], scale * axis_level[gq])
            };
        }

        Ok(Self {
            order,
            bits_per_symbol,
            axis_bits,
            scale,
            points,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Maps one bit group (length `bits_per_symbol`) to its point.
    pub fn map_symbol(&self, bits: &[bool]) -> Complex64 {
        debug_assert_eq!(bits.len(), self.bits_per_symbol);
        let mut label = 0usize;
        for &b in bits {
            label = (label << 1) | b as usize;
        }
        self.points[label]
    }

    /// Hard decision to the nearest point; ties resolve to the smallest label.
    pub fn demap_symbol(&self, symbol: Complex64, out: &mut Vec<bool>) {
        let gi = self.slice_axis(symbol.re);
        let label = if self.order == 2 {
            gi
        } else {
            let gq = self.slice_axis(symbol.im);
            (gi << self.axis_bits) | gq
        };
        for i in (0..self.bits_per_symbol).rev() {
            out.push((label >> i) & 1 == 1);
        }
    }

    /// Nearest axis level for one coordinate, returned as the axis Gray label.
    ///
    /// Square-grid nearest-point search separates per axis; exact midpoints
    /// go to the numerically smaller Gray label so that the overall decision
    /// is the lexicographically smallest bit label.
    fn slice_axis(&self, coord: f64) -> usize {
        let levels = 1usize << self.axis_bits;
        let max_level = (levels - 1) as f64;
        let t = (max_level - coord / self.scale) / 2.0;
        if t <= 0.0 {
            return gray(0);
        }
        if t >= (levels - 1) as f64 {
            return gray(levels - 1);
        }
        let lo = t.floor();
        let frac = t - lo;
        let v_lo = lo as usize;
        if (frac - 0.5).abs() < 1e-12 {
            gray(v_lo).min(gray(v_lo + 1))
        } else if frac < 0.5 {
            gray(v_lo)
        } else {
            gray(v_lo + 1)
        }
    }
}

/// Maps a bit stream onto constellation symbols (Gray labeling, unit average
/// energy over uniform bits).
pub fn map_bits(bits: &[bool], c: &Constellation) -> Result<Vec<Complex64>, DspError> {
    let bps = c.bits_per_symbol();
    if bits.len() % bps != 0 {
        return Err(DspError::BitFraming {
            count: bits.len(),
            bits_per_symbol: bps,
        });
    }
    Ok(bits.chunks(bps).map(|g| c.map_symbol(g)).collect())
}

/// Hard-decision demapping of every symbol back to bits.
pub fn demap_bits(symbols: &[Complex64], c: &Constellation) -> Vec<bool> {
    let mut out = Vec::with_capacity(symbols.len() * c.bits_per_symbol());
    for &s in symbols {
        c.demap_symbol(s, &mut out);
    }
    out
}
