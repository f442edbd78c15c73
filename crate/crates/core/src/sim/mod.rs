//! Synthetic FMCW scenes and breathing audio with known ground truth.
//!
//! Everything here is deterministic under the scene seed, and the test
//! suites use it as the reference for the processing chains.

mod audio;
mod cube;
mod motion;
mod scene;

pub use audio::{synth_audio, BreathAudioSpec};
pub use cube::{datagram_stream, synth_cube, ADC_FULL_SCALE};
pub use motion::{chest_displacement, MotionSpec, RateStep};
pub use scene::{SceneSpec, CHAMBER_EXTENT_M};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("duration {duration_s} s is shorter than the minimum {min_s} s")]
    DurationTooShort { duration_s: f64, min_s: f64 },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("invalid audio spec: {0}")]
    InvalidAudio(String),
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
