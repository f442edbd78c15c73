use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// Breathing rate change at `at_s`, phase-continuous.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateStep {
    pub at_s: f64,
    pub rate_bpm: f64,
}

/// Chest motion of one subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionSpec {
    pub base_range_m: f64,
    pub resp_rate_bpm: f64,
    /// Peak chest displacement of the fundamental (m).
    pub resp_amplitude_m: f64,
    /// Amplitude of the second harmonic relative to the fundamental.
    #[serde(default)]
    pub harmonic_2_frac: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heart_rate_bpm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heart_amplitude_m: Option<f64>,
    /// Optional rate changes, sorted by time.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rate_steps: Vec<RateStep>,
}

impl MotionSpec {
    pub fn breathing(base_range_m: f64, resp_rate_bpm: f64, resp_amplitude_m: f64) -> Self {
        Self {
            base_range_m,
            resp_rate_bpm,
            resp_amplitude_m,
            harmonic_2_frac: 0.0,
            heart_rate_bpm: None,
            heart_amplitude_m: None,
            rate_steps: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let finite_nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(format!("{name} = {v} must be finite and nonnegative"))
            }
        };
        if !(self.base_range_m.is_finite() && self.base_range_m > 0.0) {
            return Err(format!("base_range_m = {} must be positive", self.base_range_m));
        }
        finite_nonneg("resp_rate_bpm", self.resp_rate_bpm)?;
        finite_nonneg("resp_amplitude_m", self.resp_amplitude_m)?;
        if !(0.0..=1.0).contains(&self.harmonic_2_frac) {
            return Err(format!("harmonic_2_frac = {} must lie in [0, 1]", self.harmonic_2_frac));
        }
        if let Some(v) = self.heart_rate_bpm {
            finite_nonneg("heart_rate_bpm", v)?;
        }
        if let Some(v) = self.heart_amplitude_m {
            finite_nonneg("heart_amplitude_m", v)?;
        }
        for s in &self.rate_steps {
            finite_nonneg("rate_steps.at_s", s.at_s)?;
            finite_nonneg("rate_steps.rate_bpm", s.rate_bpm)?;
        }
        if self.rate_steps.windows(2).any(|w| w[1].at_s < w[0].at_s) {
            return Err("rate_steps must be sorted by at_s".into());
        }
        Ok(())
    }

    /// Breathing rate in effect at `t`.
    pub fn rate_at(&self, t: f64) -> f64 {
        self.rate_steps
            .iter()
            .take_while(|s| s.at_s <= t)
            .last()
            .map_or(self.resp_rate_bpm, |s| s.rate_bpm)
    }

    /// Respiration cycles elapsed by `t` (integral of rate over time).
    fn cycles(&self, t: f64) -> f64 {
        let mut cycles = 0.0;
        let mut from = 0.0;
        let mut rate = self.resp_rate_bpm;
        for s in &self.rate_steps {
            if s.at_s >= t {
                break;
            }
            cycles += rate / 60.0 * (s.at_s - from);
            from = s.at_s;
            rate = s.rate_bpm;
        }
        cycles + rate / 60.0 * (t - from)
    }

    /// Largest possible excursion from `base_range_m`.
    pub fn max_excursion_m(&self) -> f64 {
        self.resp_amplitude_m * (1.0 + self.harmonic_2_frac) + self.heart_amplitude_m.unwrap_or(0.0)
    }
}

/// Chest displacement from the rest position at time `t` (m):
/// `A [sin(θ) + h sin(2θ)]` with `θ = 2π ∫ rate`, plus an optional cardiac term.
pub fn chest_displacement(spec: &MotionSpec, t: f64) -> f64 {
    let theta = 2.0 * PI * spec.cycles(t);
    let mut d = spec.resp_amplitude_m * (theta.sin() + spec.harmonic_2_frac * (2.0 * theta).sin());
    if let (Some(rate), Some(amp)) = (spec.heart_rate_bpm, spec.heart_amplitude_m) {
        d += amp * (2.0 * PI * rate / 60.0 * t).sin();
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_amplitude() {
        let m = MotionSpec::breathing(0.5, 15.0, 0.0);
        assert!((0..100).all(|i| chest_displacement(&m, i as f64 * 0.37) == 0.0));
    }

    #[test]
    fn quarter_period() {
        let m = MotionSpec::breathing(0.5, 15.0, 0.001);
        assert!((chest_displacement(&m, 1.0) - 0.001).abs() < 1e-15);
    }

    #[test]
    fn harmonic_and_heart_terms() {
        let m = MotionSpec {
            harmonic_2_frac: 0.5,
            heart_rate_bpm: Some(60.0),
            heart_amplitude_m: Some(1e-4),
            ..MotionSpec::breathing(0.5, 15.0, 0.001)
        };
        // t = 0.5 s: θ = π/4, heart phase = π
        let expect = 0.001 * ((PI / 4.0).sin() + 0.5 * (PI / 2.0).sin()) + 1e-4 * PI.sin();
        assert!((chest_displacement(&m, 0.5) - expect).abs() < 1e-15);
        assert!((m.max_excursion_m() - 0.0016).abs() < 1e-15);
    }

    #[test]
    fn rate_step_is_phase_continuous() {
        let m = MotionSpec {
            rate_steps: vec![RateStep { at_s: 100.0, rate_bpm: 20.0 }],
            ..MotionSpec::breathing(0.5, 12.0, 0.001)
        };
        assert_eq!(m.rate_at(99.9), 12.0);
        assert_eq!(m.rate_at(100.0), 20.0);
        let before = chest_displacement(&m, 100.0 - 1e-9);
        let after = chest_displacement(&m, 100.0 + 1e-9);
        assert!((before - after).abs() < 1e-10);
        // 20 cycles by t=100, then 1/3 cycle per second
        assert!((m.cycles(103.0) - 21.0).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(MotionSpec::breathing(0.0, 15.0, 0.001).validate().is_err());
        assert!(MotionSpec::breathing(0.5, -1.0, 0.001).validate().is_err());
        assert!(MotionSpec { harmonic_2_frac: 1.5, ..MotionSpec::breathing(0.5, 15.0, 0.001) }.validate().is_err());
        assert!(MotionSpec::breathing(0.5, 15.0, 0.001).validate().is_ok());
    }

    proptest! {
        #[test]
        fn periodic(rate in 1.0f64..60.0, amp in 0.0f64..0.01, h in 0.0f64..1.0, t in 0.0f64..600.0) {
            let m = MotionSpec { harmonic_2_frac: h, ..MotionSpec::breathing(0.5, rate, amp) };
            let period = 60.0 / rate;
            prop_assert!((chest_displacement(&m, t) - chest_displacement(&m, t + period)).abs() < 1e-12);
        }
    }
}
