use serde::{Deserialize, Serialize};

use super::stft::Spectrogram;
use super::SpectralError;

pub const DEFAULT_BAND_BPM: (f64, f64) = (6.0, 60.0);
/// Largest time difference at which two rate instants are paired.
pub const MATCH_TOLERANCE_S: f64 = 0.5;

/// Dominant rate per spectrogram instant.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RateSeries {
    pub times_s: Vec<f64>,
    pub rates_bpm: Vec<f64>,
    pub magnitudes: Vec<f64>,
}

impl RateSeries {
    pub fn len(&self) -> usize {
        self.times_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_s.is_empty()
    }

    pub fn mean_bpm(&self) -> f64 {
        self.rates_bpm.iter().sum::<f64>() / self.len() as f64
    }

    /// Population standard deviation of the rates.
    pub fn std_bpm(&self) -> f64 {
        let m = self.mean_bpm();
        (self.rates_bpm.iter().map(|r| (r - m).powi(2)).sum::<f64>() / self.len() as f64).sqrt()
    }

    /// Fraction of instants whose rate lies within `tol` of `target`.
    pub fn fraction_within(&self, target: f64, tol: f64) -> f64 {
        let n = self.rates_bpm.iter().filter(|r| (*r - target).abs() <= tol).count();
        n as f64 / self.len() as f64
    }
}

/// Argmax of the magnitude over bins whose |frequency| lies in `band_bpm`,
/// per time frame. Ties go to the lower |frequency| (then the positive one).
pub fn extract_rate(spec: &Spectrogram, band_bpm: (f64, f64)) -> Result<RateSeries, SpectralError> {
    let (low, high) = band_bpm;
    let eps = 1e-9;
    let mut candidates: Vec<usize> = spec
        .freq_axis_bpm()
        .iter()
        .enumerate()
        .filter(|(_, f)| {
            let a = f.abs();
            a >= low - eps && a <= high + eps
        })
        .map(|(i, _)| i)
        .collect();
    if candidates.is_empty() || !(low <= high) {
        return Err(SpectralError::EmptyBand { low, high });
    }
    let axis = spec.freq_axis_bpm();
    candidates.sort_by(|&a, &b| {
        axis[a]
            .abs()
            .total_cmp(&axis[b].abs())
            .then_with(|| axis[b].total_cmp(&axis[a]))
    });

    let mut out = RateSeries {
        times_s: spec.time_axis_s().to_vec(),
        rates_bpm: Vec::with_capacity(spec.frames()),
        magnitudes: Vec::with_capacity(spec.frames()),
    };
    for t in 0..spec.frames() {
        let row = spec.frame(t);
        let mut best = candidates[0];
        for &k in &candidates[1..] {
            if row[k] > row[best] {
                best = k;
            }
        }
        out.rates_bpm.push(axis[best].abs());
        out.magnitudes.push(row[best]);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateComparison {
    pub mae_bpm: f64,
    pub rmse_bpm: f64,
    pub within_2bpm_fraction: f64,
    pub n_instants: usize,
}

/// Pair each instant of `a` with the nearest instant of `b` (within
/// [`MATCH_TOLERANCE_S`]) and summarise the rate differences.
pub fn compare_rates(a: &RateSeries, b: &RateSeries) -> Result<RateComparison, SpectralError> {
    let mut diffs = Vec::new();
    for (&t, &ra) in a.times_s.iter().zip(&a.rates_bpm) {
        if let Some(j) = nearest(&b.times_s, t) {
            if (b.times_s[j] - t).abs() <= MATCH_TOLERANCE_S {
                diffs.push(ra - b.rates_bpm[j]);
            }
        }
    }
    if diffs.is_empty() {
        return Err(SpectralError::NoOverlap { tolerance_s: MATCH_TOLERANCE_S });
    }
    let n = diffs.len() as f64;
    Ok(RateComparison {
        mae_bpm: diffs.iter().map(|d| d.abs()).sum::<f64>() / n,
        rmse_bpm: (diffs.iter().map(|d| d * d).sum::<f64>() / n).sqrt(),
        within_2bpm_fraction: diffs.iter().filter(|d| d.abs() <= 2.0).count() as f64 / n,
        n_instants: diffs.len(),
    })
}

/// Index of the element of the sorted slice `ts` closest to `t`.
fn nearest(ts: &[f64], t: f64) -> Option<usize> {
    if ts.is_empty() {
        return None;
    }
    let i = ts.partition_point(|&x| x < t);
    if i == 0 {
        return Some(0);
    }
    if i == ts.len() {
        return Some(ts.len() - 1);
    }
    Some(if t - ts[i - 1] <= ts[i] - t { i - 1 } else { i })
}
