use serde::{Deserialize, Serialize};

use super::fir::{filter_centered, LowpassSpec};
use super::{AudioError, ENVELOPE_RATE_HZ};

/// Nonnegative breathing envelope at the radar frame rate.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTrace {
    pub samples: Vec<f64>,
    pub rate_hz: f64,
}

/// How the decimated audio is turned into an amplitude before smoothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rectifier {
    /// |x|
    #[default]
    Abs,
    /// x²
    Square,
}

impl std::str::FromStr for Rectifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "abs" => Ok(Rectifier::Abs),
            "square" => Ok(Rectifier::Square),
            other => Err(format!("unknown rectifier `{other}` (abs, square)")),
        }
    }
}

impl std::fmt::Display for Rectifier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rectifier::Abs => "abs",
            Rectifier::Square => "square",
        })
    }
}

/// 1.5 Hz pass / 3 Hz stop, 60 dB Kaiser low-pass at 20 Hz.
pub fn envelope_filter() -> Vec<f64> {
    LowpassSpec { pass_hz: 1.5, stop_hz: 3.0, atten_db: 60.0, pass_loss_db: 1.0, rate_hz: ENVELOPE_RATE_HZ }.design()
}

pub fn envelope(series: &[f64], rectifier: Rectifier) -> Result<EnvelopeTrace, AudioError> {
    if series.is_empty() {
        return Err(AudioError::EmptySeries);
    }
    let rectified: Vec<f64> = match rectifier {
        Rectifier::Abs => series.iter().map(|x| x.abs()).collect(),
        Rectifier::Square => series.iter().map(|x| x * x).collect(),
    };
    let samples = filter_centered(&envelope_filter(), &rectified)
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    Ok(EnvelopeTrace { samples, rate_hz: ENVELOPE_RATE_HZ })
}
