//! Headset-audio reference: 44.1 kHz recording to a 20 Hz breathing envelope.
//!
//! The audio is low-pass filtered and decimated by 2205 to the radar frame
//! rate, then full-wave rectified and smoothed by a 1.5 Hz FIR low-pass.

mod decimate;
mod envelope;
pub mod fir;
mod pipeline;
mod wav;

pub use decimate::{decimate_to_frame_rate, Decimator, DECIMATOR_ORDER};
pub use envelope::{envelope, envelope_filter, EnvelopeTrace, Rectifier};
pub use pipeline::{AudioOutput, AudioPipeline};
pub use wav::{read_wav, read_wav_from, write_wav, write_wav_to};

use thiserror::Error;

use crate::spectral::SpectralError;

/// Sample rate of headset recordings.
pub const AUDIO_RATE_HZ: f64 = 44_100.0;
/// Rate of the breathing envelope, matching the radar frame rate.
pub const ENVELOPE_RATE_HZ: f64 = 20.0;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("audio of {len} samples is too short; need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("input rate {rate} Hz is not an integer multiple of {target} Hz")]
    UnsupportedRate { rate: f64, target: f64 },
    #[error("unsupported audio format: {0}")]
    UnsupportedFormat(String),
    #[error("audio sample {index} = {value} lies outside [-1, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("series is empty")]
    EmptySeries,
    #[error("wav: {0}")]
    Wav(#[from] hound::Error),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Mono audio, full scale ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioTrace {
    samples: Vec<f64>,
    rate_hz: f64,
}

impl AudioTrace {
    pub fn new(samples: Vec<f64>, rate_hz: f64) -> Result<Self, AudioError> {
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, v)| !(v.abs() <= 1.0)) {
            return Err(AudioError::OutOfRange { index, value });
        }
        if !(rate_hz.is_finite() && rate_hz > 0.0) {
            return Err(AudioError::UnsupportedRate { rate: rate_hz, target: ENVELOPE_RATE_HZ });
        }
        Ok(Self { samples, rate_hz })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn rate_hz(&self) -> f64 {
        self.rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.rate_hz
    }
}
