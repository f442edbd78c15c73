use serde::{Deserialize, Serialize};

use super::motion::MotionSpec;
use super::SimError;

/// Largest range any scatterer may occupy (m).
pub const CHAMBER_EXTENT_M: f64 = 6.0;

/// Declarative radar scene.
///
/// JSON form:
///
/// ```json
/// {
///   "targets": [[{"base_range_m": 0.5, "resp_rate_bpm": 15.0, "resp_amplitude_m": 0.001}, 1.0]],
///   "static_reflectors": [[1.49, 0.6]],
///   "snr_db": 30.0,
///   "seed": 7
/// }
/// ```
///
/// `targets` pairs a [`MotionSpec`] with a reflectivity; `static_reflectors`
/// pairs a range with a reflectivity. `snr_db` is relative to the strongest
/// scatterer, per fast-time sample; `null` disables noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    #[serde(default)]
    pub targets: Vec<(MotionSpec, f64)>,
    #[serde(default)]
    pub static_reflectors: Vec<(f64, f64)>,
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl Default for SceneSpec {
    /// One subject at 0.5 m breathing 1 mm at 15 bpm, 30 dB SNR.
    fn default() -> Self {
        Self {
            targets: vec![(MotionSpec::breathing(0.5, 15.0, 0.001), 1.0)],
            static_reflectors: Vec::new(),
            snr_db: Some(30.0),
            seed: 0,
        }
    }
}

impl SceneSpec {
    pub fn empty() -> Self {
        Self { targets: Vec::new(), static_reflectors: Vec::new(), snr_db: None, seed: 0 }
    }

    pub fn from_json(s: &str) -> Result<Self, SimError> {
        let scene: Self = serde_json::from_str(s)?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidScene(m));
        for (i, (motion, refl)) in self.targets.iter().enumerate() {
            motion.validate().map_err(|e| SimError::InvalidScene(format!("target {i}: {e}")))?;
            if !(refl.is_finite() && *refl >= 0.0) {
                return bad(format!("target {i}: reflectivity {refl} must be nonnegative"));
            }
            let far = motion.base_range_m + motion.max_excursion_m();
            if far > CHAMBER_EXTENT_M || motion.base_range_m - motion.max_excursion_m() <= 0.0 {
                return bad(format!("target {i}: range excursion leaves (0, {CHAMBER_EXTENT_M}] m"));
            }
        }
        for (i, (range, refl)) in self.static_reflectors.iter().enumerate() {
            if !(range.is_finite() && *range > 0.0 && *range <= CHAMBER_EXTENT_M) {
                return bad(format!("static reflector {i}: range {range} outside (0, {CHAMBER_EXTENT_M}] m"));
            }
            if !(refl.is_finite() && *refl >= 0.0) {
                return bad(format!("static reflector {i}: reflectivity {refl} must be nonnegative"));
            }
        }
        if let Some(snr) = self.snr_db {
            if snr.is_nan() {
                return bad("snr_db is NaN".into());
            }
        }
        Ok(())
    }

    /// Reflectivity of the strongest scatterer, or 0 for an empty scene.
    pub fn max_reflectivity(&self) -> f64 {
        self.targets
            .iter()
            .map(|t| t.1)
            .chain(self.static_reflectors.iter().map(|s| s.1))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut s = SceneSpec::default();
        s.static_reflectors.push((1.49, 0.6));
        let back = SceneSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn documented_example_parses() {
        let s = SceneSpec::from_json(
            r#"{
              "targets": [[{"base_range_m": 0.5, "resp_rate_bpm": 15.0, "resp_amplitude_m": 0.001}, 1.0]],
              "static_reflectors": [[1.49, 0.6]],
              "snr_db": 30.0,
              "seed": 7
            }"#,
        )
        .unwrap();
        assert_eq!(s.targets[0].0.harmonic_2_frac, 0.0);
        assert_eq!(s.max_reflectivity(), 1.0);
        assert_eq!(s.seed, 7);
    }

    #[test]
    fn rejects_out_of_chamber() {
        let s = SceneSpec { static_reflectors: vec![(6.5, 1.0)], ..SceneSpec::empty() };
        assert!(s.validate().is_err());
        let s = SceneSpec { targets: vec![(MotionSpec::breathing(5.999, 15.0, 0.01), 1.0)], ..SceneSpec::empty() };
        assert!(s.validate().is_err());
        assert!(SceneSpec::from_json(r#"{"targets": [[{"base_range_m": -1, "resp_rate_bpm": 15, "resp_amplitude_m": 0.001}, 1]], "snr_db": null}"#).is_err());
        assert!(SceneSpec::from_json("{not json").is_err());
    }
}
