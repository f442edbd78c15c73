use serde::{Deserialize, Serialize};

use super::decimate::{decimate_to_frame_rate, Decimator};
use super::envelope::{envelope, EnvelopeTrace, Rectifier};
use super::{AudioError, AudioTrace};
use crate::spectral::{extract_rate, stft_real, RateSeries, Spectrogram, StftParams, DEFAULT_BAND_BPM};

/// Settings for the audio chain from recording to rate series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AudioPipeline {
    pub decimator: Decimator,
    pub rectifier: Rectifier,
    pub stft: StftParams,
    pub band_bpm: (f64, f64),
}

impl Default for AudioPipeline {
    fn default() -> Self {
        Self {
            decimator: Decimator::Single,
            rectifier: Rectifier::Abs,
            stft: StftParams::default(),
            band_bpm: DEFAULT_BAND_BPM,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AudioOutput {
    pub decimated: Vec<f64>,
    pub envelope: EnvelopeTrace,
    pub spectrogram: Spectrogram,
    pub rates: RateSeries,
}

impl AudioPipeline {
    pub fn run(&self, audio: &AudioTrace) -> Result<AudioOutput, AudioError> {
        let decimated = decimate_to_frame_rate(audio, self.decimator)?;
        let envelope = envelope(&decimated, self.rectifier)?;
        let stft = StftParams { sample_rate_hz: envelope.rate_hz, ..self.stft };
        let spectrogram = stft_real(&envelope.samples, &stft)?;
        let rates = extract_rate(&spectrogram, self.band_bpm)?;
        Ok(AudioOutput { decimated, envelope, spectrogram, rates })
    }
}
