use serde::{Deserialize, Serialize};

use super::fir::{filter_centered_at, kaiser_beta, lowpass_taps, LowpassSpec};
use super::{AudioError, AudioTrace, ENVELOPE_RATE_HZ};

/// Filter order of the single-stage anti-aliasing filter.
pub const DECIMATOR_ORDER: usize = 20;

/// Anti-aliasing strategy for the 44.1 kHz → 20 Hz reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decimator {
    /// One order-20 Kaiser low-pass (cutoff at the output Nyquist rate), then
    /// keep every M-th sample. Alias rejection is weak at M = 2205.
    #[default]
    Single,
    /// Cascade of short decimating stages with 60 dB alias rejection over 0–8 Hz.
    Multistage,
}

impl std::str::FromStr for Decimator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Decimator::Single),
            "multistage" => Ok(Decimator::Multistage),
            other => Err(format!("unknown decimator `{other}` (single, multistage)")),
        }
    }
}

impl std::fmt::Display for Decimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decimator::Single => "single",
            Decimator::Multistage => "multistage",
        })
    }
}

/// Split a decimation factor into stages of at most 10.
fn stage_factors(total: usize) -> Vec<usize> {
    let mut primes = Vec::new();
    let mut n = total;
    let mut p = 2;
    while n > 1 {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
        p += 1;
    }
    primes.sort_unstable_by(|a, b| b.cmp(a));
    let mut stages: Vec<usize> = Vec::new();
    for p in primes {
        match stages.iter_mut().find(|s| **s * p <= 10) {
            Some(s) => *s *= p,
            None => stages.push(p),
        }
    }
    stages.sort_unstable_by(|a, b| b.cmp(a));
    stages
}

fn factor(rate: f64, target: f64) -> Result<usize, AudioError> {
    let m = rate / target;
    if (m - m.round()).abs() > 1e-9 || m.round() < 1.0 {
        return Err(AudioError::UnsupportedRate { rate, target });
    }
    Ok(m.round() as usize)
}

/// Low-pass and decimate to the radar frame rate. Output sample `m`
/// corresponds to input sample `m × M`; the output has `floor(N / M)` samples.
pub fn decimate_to_frame_rate(audio: &AudioTrace, decimator: Decimator) -> Result<Vec<f64>, AudioError> {
    let rate = audio.rate_hz();
    let m = factor(rate, ENVELOPE_RATE_HZ)?;
    let need = DECIMATOR_ORDER + 1;
    if audio.len() < need {
        return Err(AudioError::TooShort { len: audio.len(), need });
    }
    let x = audio.samples();
    match decimator {
        Decimator::Single => {
            let taps = lowpass_taps(DECIMATOR_ORDER + 1, ENVELOPE_RATE_HZ / 2.0, rate, kaiser_beta(60.0));
            Ok(filter_centered_at(&taps, x, m))
        }
        Decimator::Multistage => {
            let stages = stage_factors(m);
            let mut y = x.to_vec();
            let mut r = rate;
            for (i, &f) in stages.iter().enumerate() {
                let out_rate = r / f as f64;
                let last = i + 1 == stages.len();
                let spec = LowpassSpec {
                    pass_hz: 0.4 * ENVELOPE_RATE_HZ,
                    // Only the final band edge must sit at the output Nyquist rate;
                    // earlier stages just protect 0..Nyquist from folding.
                    stop_hz: if last { out_rate / 2.0 } else { out_rate - ENVELOPE_RATE_HZ / 2.0 },
                    atten_db: 60.0,
                    pass_loss_db: 0.1,
                    rate_hz: r,
                };
                y = filter_centered_at(&spec.design(), &y, f);
                r = out_rate;
            }
            Ok(y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::AUDIO_RATE_HZ;
    use std::f64::consts::PI;

    fn trace(f: impl Fn(f64) -> f64, seconds: f64) -> AudioTrace {
        let n = (seconds * AUDIO_RATE_HZ) as usize;
        AudioTrace::new((0..n).map(|i| f(i as f64 / AUDIO_RATE_HZ)).collect(), AUDIO_RATE_HZ).unwrap()
    }

    #[test]
    fn stages_of_2205() {
        assert_eq!(stage_factors(2205), vec![9, 7, 7, 5]);
        assert_eq!(stage_factors(2205).iter().product::<usize>(), 2205);
        assert_eq!(stage_factors(1), Vec::<usize>::new());
    }

    #[test]
    fn zero_audio() {
        let a = AudioTrace::new(vec![0.0; 2205 * 7 + 100], AUDIO_RATE_HZ).unwrap();
        for d in [Decimator::Single, Decimator::Multistage] {
            let y = decimate_to_frame_rate(&a, d).unwrap();
            assert_eq!(y, vec![0.0; 7]);
        }
    }

    #[test]
    fn dc_gain_is_unity() {
        let a = trace(|_| 0.5, 5.0);
        for d in [Decimator::Single, Decimator::Multistage] {
            let y = decimate_to_frame_rate(&a, d).unwrap();
            assert_eq!(y.len(), 100);
            assert!(y.iter().all(|v| (v - 0.5).abs() < 1e-9), "{d:?}");
        }
    }

    #[test]
    fn slow_sinusoid_passes() {
        // closed-form resample: output m equals sin(2π·0.25·m/20)
        let a = trace(|t| 0.8 * (2.0 * PI * 0.25 * t).sin(), 20.0);
        for d in [Decimator::Single, Decimator::Multistage] {
            let y = decimate_to_frame_rate(&a, d).unwrap();
            assert_eq!(y.len(), 400);
            let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!((peak / 0.8 - 1.0).abs() < 0.05, "{d:?} {peak}");
            for (m, v) in y.iter().enumerate().skip(20).take(360) {
                let expect = 0.8 * (2.0 * PI * 0.25 * m as f64 / 20.0).sin();
                assert!((v - expect).abs() < 0.04, "{d:?} m={m}");
            }
        }
    }

    #[test]
    fn multistage_rejects_aliases() {
        // 20.3 Hz folds to 0.3 Hz at 20 Hz output.
        let a = trace(|t| 0.5 * (2.0 * PI * 20.3 * t).sin(), 10.0);
        let single = decimate_to_frame_rate(&a, Decimator::Single).unwrap();
        let multi = decimate_to_frame_rate(&a, Decimator::Multistage).unwrap();
        let rms = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / v.len() as f64).sqrt();
        assert!(rms(&single) > 0.3);
        assert!(rms(&multi[20..180]) < 0.5 * 1e-3);
    }

    #[test]
    fn length_is_floor() {
        for n in [21, 2204, 2205, 2206, 10_000] {
            let a = AudioTrace::new(vec![0.1; n], AUDIO_RATE_HZ).unwrap();
            assert_eq!(decimate_to_frame_rate(&a, Decimator::Single).unwrap().len(), n / 2205);
            assert_eq!(decimate_to_frame_rate(&a, Decimator::Multistage).unwrap().len(), n / 2205);
        }
    }

    #[test]
    fn errors() {
        let a = AudioTrace::new(vec![0.0; 20], AUDIO_RATE_HZ).unwrap();
        assert!(matches!(decimate_to_frame_rate(&a, Decimator::Single), Err(AudioError::TooShort { .. })));
        let a = AudioTrace::new(vec![0.0; 1000], 44_110.0).unwrap();
        assert!(matches!(decimate_to_frame_rate(&a, Decimator::Single), Err(AudioError::UnsupportedRate { .. })));
    }
}
