//! Radar respiration chain: range FFT, target-bin selection, static clutter
//! removal and phase extraction.
//!
//! Variant A turns the complex slow-time series of the selected range bin
//! into an unwrapped phase trace. Variant B skips phase extraction and hands
//! the clutter-removed complex series to a two-sided STFT.

mod phase;
mod pipeline;
mod range;

pub use phase::{
    clutter_remove, estimate_arc_center, extract_unwrapped_phase, remove_linear_trend, remove_static,
    unwrap_phase, variant_b_series, ClutterRemoval, PhaseTrace,
};
pub use pipeline::{RadarOutput, RadarPipeline, Variant};
pub use range::{range_fft, select_target_bin, static_profile, RangeTimeMap, StaticProfile, DEFAULT_TARGET_WINDOW_M};

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, PartialEq)]
pub enum RadarError {
    #[error("radar cube has no frames")]
    EmptyCube,
    #[error("need at least 2 frames, got {0}")]
    TooFewFrames(usize),
    #[error("no range bin centre lies in [{min_m}, {max_m}] m")]
    WindowEmpty { min_m: f64, max_m: f64 },
    #[error("range bin {bin} does not exist (map has {bins} bins)")]
    BinOutOfRange { bin: usize, bins: usize },
    #[error("slow-time series is empty")]
    EmptySeries,
    #[error("slow-time signal is identically zero; phase is undefined")]
    AllZero,
    #[error("slow-time sample {index} has zero magnitude; phase is undefined")]
    ZeroMagnitudeSample { index: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
