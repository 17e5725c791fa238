//! Free-space link budget tying surface size, distances, and the
//! jamming-to-signal ratio together.

use serde::{Deserialize, Serialize};

use super::ChannelError;

/// Speed of light, m/s.
pub const C0: f64 = 299_792_458.0;

/// Positions of the three parties and the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    /// Transmitter-receiver distance, m.
    pub d_ab: f64,
    /// Transmitter-surface distance, m.
    pub d_ae: f64,
    /// Surface-receiver distance, m.
    pub d_eb: f64,
    /// Carrier frequency, Hz.
    pub frequency_hz: f64,
}

impl LinkGeometry {
    pub fn new(d_ab: f64, d_ae: f64, d_eb: f64, frequency_hz: f64) -> Self {
        Self {
            d_ab,
            d_ae,
            d_eb,
            frequency_hz,
        }
    }

    /// Surface mounted perpendicular to the link axis at the transmitter
    /// end: `d_eb = sqrt(d_ab^2 + d_ae^2)`.
    pub fn perpendicular(d_ab: f64, d_ae: f64, frequency_hz: f64) -> Self {
        Self::new(d_ab, d_ae, d_ab.hypot(d_ae), frequency_hz)
    }

    pub fn wavelength(&self) -> f64 {
        C0 / self.frequency_hz
    }

    fn validate(&self) -> Result<(), ChannelError> {
        for v in [self.d_ab, self.d_ae, self.d_eb, self.frequency_hz] {
            if !(v > 0.0) {
                return Err(ChannelError::NonPositiveGeometry(v));
            }
        }
        Ok(())
    }
}

/// Free-space path gain of the direct link: `(λ / 4π d_AB)^2`.
pub fn direct_path_gain(g: &LinkGeometry) -> Result<f64, ChannelError> {
    g.validate()?;
    let lam = g.wavelength();
    Ok((lam / (4.0 * std::f64::consts::PI * g.d_ab)).powi(2))
}

/// Path gain via an optimally configured surface of area `area_m2`:
/// `(A / 4π d_AE d_EB)^2`.
pub fn irs_path_gain(g: &LinkGeometry, area_m2: f64) -> Result<f64, ChannelError> {
    g.validate()?;
    if area_m2 < 0.0 {
        return Err(ChannelError::NonPositiveGeometry(area_m2));
    }
    Ok((area_m2 / (4.0 * std::f64::consts::PI * g.d_ae * g.d_eb)).powi(2))
}

/// Linear jamming-to-signal ratio of the two paths:
/// `(A d_AB / (d_AE d_EB λ))^2`.
pub fn jsr_from_geometry(g: &LinkGeometry, area_m2: f64) -> Result<f64, ChannelError> {
    g.validate()?;
    if area_m2 < 0.0 {
        return Err(ChannelError::NonPositiveGeometry(area_m2));
    }
    Ok((area_m2 * g.d_ab / (g.d_ae * g.d_eb * g.wavelength())).powi(2))
}

/// Minimum surface area achieving a linear JSR:
/// `A = sqrt(JSR) d_AE d_EB λ / d_AB`.
pub fn required_surface_area(g: &LinkGeometry, jsr_linear: f64) -> Result<f64, ChannelError> {
    g.validate()?;
    if jsr_linear < 0.0 {
        return Err(ChannelError::NegativeJsr(jsr_linear));
    }
    Ok(jsr_linear.sqrt() * g.d_ae * g.d_eb * g.wavelength() / g.d_ab)
}
