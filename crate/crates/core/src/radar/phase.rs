use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::RadarError;

/// How the static component of a slow-time series is estimated before phase
/// extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClutterRemoval {
    None,
    /// Complex arithmetic mean.
    #[default]
    Mean,
    /// Centre of the least-squares circle through the samples. Unlike the
    /// mean it is not pulled toward the arc traced by a large phase swing.
    Arc,
}

impl fmt::Display for ClutterRemoval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClutterRemoval::None => "none",
            ClutterRemoval::Mean => "mean",
            ClutterRemoval::Arc => "arc",
        })
    }
}

impl FromStr for ClutterRemoval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(ClutterRemoval::None),
            "mean" => Ok(ClutterRemoval::Mean),
            "arc" => Ok(ClutterRemoval::Arc),
            other => Err(format!("unknown clutter removal `{other}` (none, mean, arc)")),
        }
    }
}

/// Subtract the complex mean.
pub fn clutter_remove(series: &[Complex64]) -> Vec<Complex64> {
    if series.is_empty() {
        return Vec::new();
    }
    let mean = series.iter().sum::<Complex64>() / series.len() as f64;
    series.iter().map(|z| z - mean).collect()
}

/// Centre of the algebraic (Kåsa) least-squares circle fit, or `None` when
/// the points are too close to collinear for a stable fit.
pub fn estimate_arc_center(series: &[Complex64]) -> Option<Complex64> {
    if series.len() < 3 {
        return None;
    }
    let n = series.len() as f64;
    let mean = series.iter().sum::<Complex64>() / n;
    // Fit x² + y² = 2a·x + 2b·y + c on centred data.
    let (mut sxx, mut sxy, mut syy, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sxz, mut syz, mut sz) = (0.0, 0.0, 0.0);
    for p in series {
        let d = p - mean;
        let (x, y) = (d.re, d.im);
        let z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sx += x;
        sy += y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    let m = [[sxx, sxy, sx], [sxy, syy, sy], [sx, sy, n]];
    let rhs = [sxz, syz, sz];
    let [u, v, _] = solve3(m, rhs)?;
    let center = Complex64::new(u / 2.0, v / 2.0);
    // A nearly straight arc puts the centre far outside the data; fall back.
    let spread = (sxx + syy) / n;
    if !(center.norm_sqr() <= 1e6 * spread) {
        return None;
    }
    Some(mean + center)
}

fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let scale = m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if !(d.abs() > 1e-12 * scale.powi(3)) {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for row in 0..3 {
            mc[row][col] = b[row];
        }
        *o = det(&mc) / d;
    }
    Some(out)
}

/// Remove the static component with the given estimator. `Arc` falls back
/// to the mean when the circle fit is degenerate.
pub fn remove_static(series: &[Complex64], mode: ClutterRemoval) -> Vec<Complex64> {
    match mode {
        ClutterRemoval::None => series.to_vec(),
        ClutterRemoval::Mean => clutter_remove(series),
        ClutterRemoval::Arc => match estimate_arc_center(series) {
            Some(c) => series.iter().map(|z| z - c).collect(),
            None => clutter_remove(series),
        },
    }
}

/// Unwrapped phase of one range bin's slow-time series (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace {
    pub samples: Vec<f64>,
    pub source_bin: usize,
    pub source_range_m: f64,
    pub sample_rate_hz: f64,
}

impl PhaseTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn detrended(&self) -> Self {
        Self { samples: remove_linear_trend(&self.samples), ..self.clone() }
    }
}

/// Remove 2π jumps: each step is replaced by its representative in (-π, π].
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut prev_raw = 0.0;
    let mut acc = 0.0;
    for (i, &w) in wrapped.iter().enumerate() {
        if i == 0 {
            acc = w;
        } else {
            let mut d = (w - prev_raw) % (2.0 * PI);
            if d > PI {
                d -= 2.0 * PI;
            } else if d <= -PI {
                d += 2.0 * PI;
            }
            acc += d;
        }
        prev_raw = w;
        out.push(acc);
    }
    out
}

/// Argument of every sample, unwrapped. The caller fills in the bin metadata.
pub fn extract_unwrapped_phase(series: &[Complex64]) -> Result<Vec<f64>, RadarError> {
    if series.is_empty() {
        return Err(RadarError::EmptySeries);
    }
    if let Some(index) = series.iter().position(|z| z.re == 0.0 && z.im == 0.0) {
        if series.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
            return Err(RadarError::AllZero);
        }
        return Err(RadarError::ZeroMagnitudeSample { index });
    }
    let wrapped: Vec<f64> = series.iter().map(|z| z.arg()).collect();
    Ok(unwrap_phase(&wrapped))
}

/// Subtract the least-squares line through `(n, x[n])`.
pub fn remove_linear_trend(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < 2 {
        return x.iter().map(|_| 0.0).collect();
    }
    let nf = n as f64;
    let t_mean = (nf - 1.0) / 2.0;
    let x_mean = x.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let dt = i as f64 - t_mean;
        sxy += dt * (v - x_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    x.iter()
        .enumerate()
        .map(|(i, &v)| v - x_mean - slope * (i as f64 - t_mean))
        .collect()
}

/// Complex path: clutter-removed series, to be analysed with a two-sided STFT.
pub fn variant_b_series(series: &[Complex64]) -> Vec<Complex64> {
    clutter_remove(series)
}
