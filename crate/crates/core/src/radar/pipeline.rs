use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{extract_unwrapped_phase, remove_linear_trend, remove_static, ClutterRemoval, PhaseTrace};
use super::range::{range_fft, select_target_bin, RangeTimeMap, DEFAULT_TARGET_WINDOW_M};
use super::RadarError;
use crate::ingest::RadarCube;
use crate::spectral::{extract_rate, stft_complex, stft_real, RateSeries, Spectrogram, StftParams, DEFAULT_BAND_BPM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Variant {
    /// Unwrapped phase, one-sided STFT.
    #[default]
    A,
    /// Complex slow-time series, two-sided STFT.
    B,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(format!("unknown variant `{other}` (A or B)")),
        }
    }
}

/// Settings for the radar chain from cube to rate series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarPipeline {
    pub min_range_m: f64,
    pub max_range_m: f64,
    pub clutter: ClutterRemoval,
    /// Subtract a least-squares line from the unwrapped phase (Variant A).
    pub detrend: bool,
    pub variant: Variant,
    pub stft: StftParams,
    pub band_bpm: (f64, f64),
}

impl Default for RadarPipeline {
    fn default() -> Self {
        Self {
            min_range_m: DEFAULT_TARGET_WINDOW_M.0,
            max_range_m: DEFAULT_TARGET_WINDOW_M.1,
            clutter: ClutterRemoval::Mean,
            detrend: true,
            variant: Variant::A,
            stft: StftParams::default(),
            band_bpm: DEFAULT_BAND_BPM,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadarOutput {
    pub map: RangeTimeMap,
    pub target_bin: usize,
    pub target_range_m: f64,
    /// Slow-time series of the target bin after static removal.
    pub slow_time: Vec<Complex64>,
    /// Variant A only.
    pub phase: Option<PhaseTrace>,
    pub spectrogram: Spectrogram,
    pub rates: RateSeries,
}

impl RadarPipeline {
    pub fn run(&self, cube: &RadarCube) -> Result<RadarOutput, RadarError> {
        let map = range_fft(cube)?;
        self.run_map(map)
    }

    pub fn run_map(&self, map: RangeTimeMap) -> Result<RadarOutput, RadarError> {
        let target_bin = select_target_bin(&map, self.min_range_m, self.max_range_m)?;
        let target_range_m = map.bin_range_m(target_bin);
        let slow_time = remove_static(&map.slow_time(target_bin)?, self.clutter);
        let stft = StftParams { sample_rate_hz: map.frame_rate_hz(), ..self.stft };

        let (phase, spectrogram) = match self.variant {
            Variant::A => {
                let mut samples = extract_unwrapped_phase(&slow_time)?;
                if self.detrend {
                    samples = remove_linear_trend(&samples);
                }
                let trace = PhaseTrace {
                    samples,
                    source_bin: target_bin,
                    source_range_m: target_range_m,
                    sample_rate_hz: map.frame_rate_hz(),
                };
                let spec = stft_real(&trace.samples, &stft)?;
                (Some(trace), spec)
            }
            Variant::B => (None, stft_complex(&slow_time, &stft)?),
        };
        let rates = extract_rate(&spectrogram, self.band_bpm)?;
        Ok(RadarOutput { map, target_bin, target_range_m, slow_time, phase, spectrogram, rates })
    }
}
