use thiserror::Error;

use crate::audio::AudioError;
use crate::config::ConfigError;
use crate::ingest::IngestError;
use crate::radar::RadarError;
use crate::sim::SimError;
use crate::spectral::SpectralError;

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Radar(#[from] RadarError),
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
