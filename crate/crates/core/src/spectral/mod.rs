//! Time-frequency analysis of 20 Hz respiration traces.
//!
//! The default [`StftParams`] use a 60 s Blackman window advanced by one
//! sample, so each DFT bin is exactly 1 bpm wide and there is one spectrum
//! per radar frame. The respiration rate at each instant is the bin of
//! largest magnitude inside a search band ([`extract_rate`]).

mod rate;
mod stft;
pub mod window;

pub use rate::{compare_rates, extract_rate, RateComparison, RateSeries, DEFAULT_BAND_BPM, MATCH_TOLERANCE_S};
pub use stft::{stft, stft_complex, stft_real, Spectrogram, StftInput, StftParams};
pub use window::WindowShape;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("invalid STFT parameters: {0}")]
    InvalidParams(String),
    #[error("trace of {len} samples is shorter than the {window}-sample window; reduce window_s explicitly")]
    TraceTooShort { len: usize, window: usize },
    #[error("search band [{low}, {high}] bpm contains no spectrogram bin")]
    EmptyBand { low: f64, high: f64 },
    #[error("rate series have no instants within {tolerance_s} s of each other")]
    NoOverlap { tolerance_s: f64 },
}
