use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::audio::{AudioTrace, AUDIO_RATE_HZ};

/// Synthetic headset recording of a breathing subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreathAudioSpec {
    pub resp_rate_bpm: f64,
    /// Only exhalations are audible; otherwise inhalations sound as loud,
    /// half a period earlier.
    pub exhale_only: bool,
    pub burst_duration_s: f64,
    /// Background noise power relative to the mean breath-sound power over
    /// the recording (dB); `-inf` (JSON `null`) for none.
    #[serde(with = "neg_inf_as_null")]
    pub noise_db: f64,
    pub seed: u64,
    /// RMS of a burst at its centre (full scale 1).
    #[serde(default = "default_burst_amplitude")]
    pub burst_amplitude: f64,
}

fn default_burst_amplitude() -> f64 {
    0.2
}

impl BreathAudioSpec {
    pub fn new(resp_rate_bpm: f64, exhale_only: bool) -> Self {
        Self {
            resp_rate_bpm,
            exhale_only,
            burst_duration_s: 1.0,
            noise_db: f64::NEG_INFINITY,
            seed: 0,
            burst_amplitude: default_burst_amplitude(),
        }
    }

    pub fn period_s(&self) -> f64 {
        60.0 / self.resp_rate_bpm
    }

    /// Long-run mean power of the breath bursts alone.
    pub fn mean_breath_power(&self) -> f64 {
        let per_period = if self.exhale_only { 1.0 } else { 2.0 };
        // mean of the squared Hann envelope over its support is 3/8
        self.burst_amplitude.powi(2) * 0.375 * per_period * self.burst_duration_s / self.period_s()
    }

    /// Standard deviation of the white background noise.
    pub fn background_sigma(&self) -> f64 {
        (self.mean_breath_power() * 10f64.powf(self.noise_db / 10.0)).sqrt()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidAudio(m));
        if !(self.resp_rate_bpm.is_finite() && self.resp_rate_bpm > 0.0) {
            return bad(format!("resp_rate_bpm = {} must be positive", self.resp_rate_bpm));
        }
        if !(self.burst_duration_s > 0.0 && self.burst_duration_s < self.period_s()) {
            return bad(format!(
                "burst_duration_s = {} must lie in (0, {})",
                self.burst_duration_s,
                self.period_s()
            ));
        }
        if self.noise_db.is_nan() || self.noise_db == f64::INFINITY {
            return bad(format!("noise_db = {}", self.noise_db));
        }
        if !(self.burst_amplitude.is_finite() && (0.0..=1.0).contains(&self.burst_amplitude)) {
            return bad(format!("burst_amplitude = {} must lie in [0, 1]", self.burst_amplitude));
        }
        Ok(())
    }
}

mod neg_inf_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::NEG_INFINITY {
            s.serialize_none()
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// Band-pass biquad (RBJ, constant 0 dB peak) centred on breath-noise frequencies.
struct Biquad {
    b0: f64,
    b2: f64,
    a1: f64,
    a2: f64,
    x1: f64,
    x2: f64,
    y1: f64,
    y2: f64,
}

impl Biquad {
    fn bandpass(centre_hz: f64, q: f64, rate_hz: f64) -> Self {
        let w0 = 2.0 * PI * centre_hz / rate_hz;
        let alpha = w0.sin() / (2.0 * q);
        let a0 = 1.0 + alpha;
        Self {
            b0: alpha / a0,
            b2: -alpha / a0,
            a1: -2.0 * w0.cos() / a0,
            a2: (1.0 - alpha) / a0,
            x1: 0.0,
            x2: 0.0,
            y1: 0.0,
            y2: 0.0,
        }
    }

    fn step(&mut self, x: f64) -> f64 {
        let y = self.b0 * x + self.b2 * self.x2 - self.a1 * self.y1 - self.a2 * self.y2;
        self.x2 = self.x1;
        self.x1 = x;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }

    /// Output RMS for unit-variance white input.
    fn noise_gain(centre_hz: f64, q: f64, rate_hz: f64) -> f64 {
        let mut f = Self::bandpass(centre_hz, q, rate_hz);
        let mut energy = f.step(1.0).powi(2);
        for _ in 0..200_000 {
            energy += f.step(0.0).powi(2);
        }
        energy.sqrt()
    }
}

const BURST_CENTRE_HZ: f64 = 500.0;
const BURST_Q: f64 = 1.0;

/// Breathing sounds as Hann-shaped bursts of band-limited noise, centred on
/// exhalation instants `(k + 1/2)·T` and, unless `exhale_only`, inhalation
/// instants `k·T`, over white background noise.
pub fn synth_audio(spec: &BreathAudioSpec, duration_s: f64) -> Result<AudioTrace, SimError> {
    spec.validate()?;
    let period = spec.period_s();
    if !(duration_s >= period) {
        return Err(SimError::DurationTooShort { duration_s, min_s: period });
    }
    let rate = AUDIO_RATE_HZ;
    let n = (duration_s * rate).round() as usize;
    let mut out = vec![0.0; n];

    // One independent stream per component so enabling noise leaves the bursts unchanged.
    let stream = |k: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(k);
        rng
    };
    let background = spec.background_sigma();
    if background > 0.0 {
        let mut rng = stream(0);
        for v in out.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut rng);
            *v = background * g;
        }
    }

    if spec.burst_amplitude > 0.0 {
        let gain = spec.burst_amplitude / Biquad::noise_gain(BURST_CENTRE_HZ, BURST_Q, rate);
        let half = spec.burst_duration_s / 2.0;
        let mut centres = Vec::new();
        let mut k = 0.0;
        while k * period - half < duration_s {
            centres.push((k + 0.5) * period);
            if !spec.exhale_only {
                centres.push(k * period);
            }
            k += 1.0;
        }
        for (i, c) in centres.into_iter().enumerate() {
            let start = ((c - half) * rate).ceil().max(0.0) as usize;
            let end = (((c + half) * rate).floor() as usize).min(n.saturating_sub(1));
            if start > end {
                continue;
            }
            let mut rng = stream(1 + i as u64);
            let mut filt = Biquad::bandpass(BURST_CENTRE_HZ, BURST_Q, rate);
            // settle the filter on the same noise process before the burst starts
            for _ in 0..512 {
                let g: f64 = StandardNormal.sample(&mut rng);
                filt.step(g);
            }
            for (j, v) in out[start..=end].iter_mut().enumerate() {
                let t = (start + j) as f64 / rate;
                let shape = 0.5 * (1.0 + (PI * (t - c) / half).cos());
                let g: f64 = StandardNormal.sample(&mut rng);
                *v += gain * shape * filt.step(g);
            }
        }
    }

    out.iter_mut().for_each(|v| *v = v.clamp(-1.0, 1.0));
    AudioTrace::new(out, rate).map_err(|e| SimError::InvalidAudio(e.to_string()))
}
