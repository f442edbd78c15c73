use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::SPEED_OF_LIGHT;

/// Chirp and frame geometry of an FMCW capture.
///
/// `bandwidth_hz` is not stored; it follows from the slope, the number of
/// fast-time samples and the ADC rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    /// Frequency at the midpoint of the chirp (Hz).
    pub carrier_hz: f64,
    pub chirp_slope_hz_per_s: f64,
    pub adc_rate_hz: f64,
    pub samples_per_chirp: usize,
    pub chirps_per_frame: usize,
    pub frame_rate_hz: f64,
    pub rx_channels: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{0} must be strictly positive and finite")]
    NonPositive(&'static str),
    #[error("frame duration {frame_s:e} s does not fit the frame period {period_s:e} s")]
    FrameOverrun { frame_s: f64, period_s: f64 },
    #[error("declared bandwidth {declared} Hz disagrees with chirp geometry ({derived} Hz)")]
    BandwidthMismatch { declared: f64, derived: f64 },
}

impl Default for RadarConfig {
    fn default() -> Self {
        Self {
            carrier_hz: 77e9,
            chirp_slope_hz_per_s: 60e12,
            adc_rate_hz: 5e6,
            samples_per_chirp: 256,
            chirps_per_frame: 1,
            frame_rate_hz: 20.0,
            rx_channels: 1,
        }
    }
}

impl RadarConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let reals = [
            ("carrier_hz", self.carrier_hz),
            ("chirp_slope_hz_per_s", self.chirp_slope_hz_per_s),
            ("adc_rate_hz", self.adc_rate_hz),
            ("frame_rate_hz", self.frame_rate_hz),
        ];
        for (name, v) in reals {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::NonPositive(name));
            }
        }
        let counts = [
            ("samples_per_chirp", self.samples_per_chirp),
            ("chirps_per_frame", self.chirps_per_frame),
            ("rx_channels", self.rx_channels),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(ConfigError::NonPositive(name));
            }
        }
        let frame_s = self.frame_duration_s();
        let period_s = 1.0 / self.frame_rate_hz;
        if frame_s > period_s {
            return Err(ConfigError::FrameOverrun { frame_s, period_s });
        }
        Ok(())
    }

    /// Swept bandwidth over the sampled part of the chirp.
    pub fn bandwidth_hz(&self) -> f64 {
        self.chirp_slope_hz_per_s * self.samples_per_chirp as f64 / self.adc_rate_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Range covered by one fast-time FFT bin.
    pub fn range_bin_spacing_m(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth_hz())
    }

    pub fn chirp_duration_s(&self) -> f64 {
        self.samples_per_chirp as f64 / self.adc_rate_hz
    }

    pub fn frame_duration_s(&self) -> f64 {
        self.chirps_per_frame as f64 * self.chirp_duration_s()
    }

    /// Beat frequency of a point scatterer at `range_m`.
    pub fn beat_frequency_hz(&self, range_m: f64) -> f64 {
        2.0 * self.chirp_slope_hz_per_s * range_m / SPEED_OF_LIGHT
    }

    /// Complex samples in one frame of the raw stream, all rx channels included.
    pub fn samples_per_frame(&self) -> usize {
        self.chirps_per_frame * self.rx_channels * self.samples_per_chirp
    }

    /// Bytes in one frame of the raw stream (int16 I and Q per sample).
    pub fn frame_bytes(&self) -> usize {
        self.samples_per_frame() * 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_geometry() {
        let cfg = RadarConfig::default();
        cfg.validate().unwrap();
        assert!((cfg.bandwidth_hz() - 3.072e9).abs() < 1.0);
        let lambda = cfg.wavelength_m();
        assert!((3.8e-3..=4.0e-3).contains(&lambda));
        let dr = cfg.range_bin_spacing_m();
        assert!((dr - 0.048_795).abs() < 1e-5, "{dr}");
        assert_eq!(cfg.frame_bytes(), 1024);
    }

    #[test]
    fn beat_frequency_lands_on_range_bin() {
        let cfg = RadarConfig::default();
        let r = 10.0 * cfg.range_bin_spacing_m();
        let bin = cfg.beat_frequency_hz(r) / (cfg.adc_rate_hz / cfg.samples_per_chirp as f64);
        assert!((bin - 10.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = RadarConfig { adc_rate_hz: 0.0, ..RadarConfig::default() };
        assert_eq!(cfg.validate(), Err(ConfigError::NonPositive("adc_rate_hz")));

        let cfg = RadarConfig { rx_channels: 0, ..RadarConfig::default() };
        assert!(cfg.validate().is_err());

        // 20000 chirps of 51.2 us do not fit in 50 ms.
        let cfg = RadarConfig { chirps_per_frame: 20_000, ..RadarConfig::default() };
        assert!(matches!(cfg.validate(), Err(ConfigError::FrameOverrun { .. })));

        let cfg = RadarConfig { carrier_hz: f64::NAN, ..RadarConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
