use num_complex::Complex64;

use super::IngestError;
use crate::config::RadarConfig;

/// Decoded capture: one rx channel, indexed `[frame][chirp][sample]`.
///
/// Samples are in ADC counts. Cubes produced by [`decode_cube`] or the
/// simulator hold integer-valued samples; arbitrary cubes are quantized by
/// [`encode_cube`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadarCube {
    config: RadarConfig,
    data: Vec<Complex64>,
    frame_timestamps: Vec<f64>,
}

impl RadarCube {
    pub fn new(config: RadarConfig, data: Vec<Complex64>, frame_timestamps: Vec<f64>) -> Result<Self, IngestError> {
        config.validate()?;
        let per_frame = config.chirps_per_frame * config.samples_per_chirp;
        let expected = per_frame * frame_timestamps.len();
        if data.len() != expected {
            return Err(IngestError::DimensionMismatch { expected, actual: data.len() });
        }
        check_timestamps(&frame_timestamps, config.frame_rate_hz)?;
        Ok(Self { config, data, frame_timestamps })
    }

    /// Cube with timestamps `n / frame_rate_hz`.
    pub fn with_nominal_timestamps(config: RadarConfig, data: Vec<Complex64>) -> Result<Self, IngestError> {
        config.validate()?;
        let per_frame = config.chirps_per_frame * config.samples_per_chirp;
        if data.len() % per_frame != 0 {
            return Err(IngestError::DimensionMismatch {
                expected: (data.len() / per_frame + 1) * per_frame,
                actual: data.len(),
            });
        }
        let frames = data.len() / per_frame;
        let ts = nominal_timestamps(frames, config.frame_rate_hz);
        Self::new(config, data, ts)
    }

    pub fn zeros(config: RadarConfig, frames: usize) -> Result<Self, IngestError> {
        let n = frames * config.chirps_per_frame * config.samples_per_chirp;
        Self::with_nominal_timestamps(config, vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn config(&self) -> &RadarConfig {
        &self.config
    }

    pub fn frames(&self) -> usize {
        self.frame_timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame_timestamps.is_empty()
    }

    pub fn frame_timestamps(&self) -> &[f64] {
        &self.frame_timestamps
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// All chirps of one frame, chirp-major.
    pub fn frame(&self, frame: usize) -> &[Complex64] {
        let n = self.config.chirps_per_frame * self.config.samples_per_chirp;
        &self.data[frame * n..(frame + 1) * n]
    }

    pub fn chirp(&self, frame: usize, chirp: usize) -> &[Complex64] {
        let s = self.config.samples_per_chirp;
        &self.frame(frame)[chirp * s..(chirp + 1) * s]
    }

    pub fn sample(&self, frame: usize, chirp: usize, sample: usize) -> Complex64 {
        self.chirp(frame, chirp)[sample]
    }

    /// The cube as it reads back after an int16 round trip.
    pub fn quantized(&self) -> Self {
        let data = self
            .data
            .iter()
            .map(|z| Complex64::new(f64::from(quantize(z.re)), f64::from(quantize(z.im))))
            .collect();
        Self { data, ..self.clone() }
    }
}

fn nominal_timestamps(frames: usize, rate: f64) -> Vec<f64> {
    (0..frames).map(|n| n as f64 / rate).collect()
}

fn check_timestamps(ts: &[f64], rate: f64) -> Result<(), IngestError> {
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(IngestError::InvalidTimestamps("non-finite value".into()));
    }
    if let Some(i) = ts.windows(2).position(|w| w[1] <= w[0]) {
        return Err(IngestError::InvalidTimestamps(format!("not increasing at frame {}", i + 1)));
    }
    if ts.len() >= 2 {
        let mean = (ts[ts.len() - 1] - ts[0]) / (ts.len() - 1) as f64;
        let nominal = 1.0 / rate;
        if ((mean - nominal) / nominal).abs() > 0.01 {
            return Err(IngestError::InvalidTimestamps(format!(
                "mean spacing {mean} s deviates from 1/frame_rate = {nominal} s by more than 1%"
            )));
        }
    }
    Ok(())
}

/// Round to the nearest ADC count, saturating at the int16 range.
pub fn quantize(x: f64) -> i16 {
    x.round().clamp(f64::from(i16::MIN), f64::from(i16::MAX)) as i16
}

/// Serialize a cube to the raw sample stream. Channel 0 is written to every
/// rx channel slot declared by the configuration.
pub fn encode_cube(cube: &RadarCube) -> Vec<u8> {
    let cfg = cube.config();
    let mut out = Vec::with_capacity(cube.frames() * cfg.frame_bytes());
    for f in 0..cube.frames() {
        for c in 0..cfg.chirps_per_frame {
            let chirp = cube.chirp(f, c);
            for _rx in 0..cfg.rx_channels {
                for z in chirp {
                    out.extend_from_slice(&quantize(z.re).to_le_bytes());
                    out.extend_from_slice(&quantize(z.im).to_le_bytes());
                }
            }
        }
    }
    out
}

/// Decode a raw sample stream into a cube (rx channel 0), with nominal timestamps.
pub fn decode_cube(stream: &[u8], config: &RadarConfig) -> Result<RadarCube, IngestError> {
    config.validate()?;
    let frame_bytes = config.frame_bytes();
    let trailing = stream.len() % frame_bytes;
    if trailing != 0 {
        return Err(IngestError::TruncatedFrame { trailing, frame_bytes });
    }
    let frames = stream.len() / frame_bytes;
    let spc = config.samples_per_chirp;
    let chirp_bytes = spc * 4;
    let mut data = Vec::with_capacity(frames * config.chirps_per_frame * spc);
    for frame in stream.chunks_exact(frame_bytes) {
        // Each chirp block holds rx_channels consecutive runs; keep the first.
        for block in frame.chunks_exact(chirp_bytes * config.rx_channels) {
            data.extend(block[..chirp_bytes].chunks_exact(4).map(|iq| {
                let i = i16::from_le_bytes([iq[0], iq[1]]);
                let q = i16::from_le_bytes([iq[2], iq[3]]);
                Complex64::new(f64::from(i), f64::from(q))
            }));
        }
    }
    RadarCube::with_nominal_timestamps(*config, data)
}

/// [`decode_cube`] for a stream that must hold exactly `frames` frames.
pub fn decode_cube_exact(stream: &[u8], config: &RadarConfig, frames: usize) -> Result<RadarCube, IngestError> {
    let expected = frames * config.frame_bytes();
    if stream.len() != expected {
        return Err(IngestError::LengthMismatch { expected, actual: stream.len() });
    }
    decode_cube(stream, config)
}
