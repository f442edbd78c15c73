use num_complex::Complex64;
use rustfft::FftPlanner;

use super::RadarError;
use crate::ingest::RadarCube;
use crate::spectral::window::hann;

/// Range window in which the chest is expected (m).
pub const DEFAULT_TARGET_WINDOW_M: (f64, f64) = (0.10, 0.80);

/// Complex range profile per frame, row-major `[frame][range_bin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeTimeMap {
    values: Vec<Complex64>,
    bins: usize,
    bin_spacing_m: f64,
    frame_rate_hz: f64,
    frame_times_s: Vec<f64>,
}

impl RangeTimeMap {
    pub fn from_parts(values: Vec<Complex64>, bins: usize, bin_spacing_m: f64, frame_rate_hz: f64, frame_times_s: Vec<f64>) -> Self {
        assert_eq!(values.len(), bins * frame_times_s.len());
        Self { values, bins, bin_spacing_m, frame_rate_hz, frame_times_s }
    }

    pub fn frames(&self) -> usize {
        self.frame_times_s.len()
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn bin_spacing_m(&self) -> f64 {
        self.bin_spacing_m
    }

    pub fn frame_rate_hz(&self) -> f64 {
        self.frame_rate_hz
    }

    pub fn frame_times_s(&self) -> &[f64] {
        &self.frame_times_s
    }

    pub fn bin_range_m(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_spacing_m
    }

    pub fn profile(&self, frame: usize) -> &[Complex64] {
        &self.values[frame * self.bins..(frame + 1) * self.bins]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Slow-time series of one range bin.
    pub fn slow_time(&self, bin: usize) -> Result<Vec<Complex64>, RadarError> {
        if bin >= self.bins {
            return Err(RadarError::BinOutOfRange { bin, bins: self.bins });
        }
        Ok(self.values.iter().skip(bin).step_by(self.bins).copied().collect())
    }

    /// Time-averaged power per bin.
    pub fn mean_power(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.bins];
        for f in 0..self.frames() {
            for (a, z) in acc.iter_mut().zip(self.profile(f)) {
                *a += z.norm_sqr();
            }
        }
        let n = self.frames().max(1) as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { values: self.values.iter().map(|z| z * factor).collect(), ..self.clone() }
    }
}

/// Coherently average the chirps of each frame, apply a Hann window over
/// fast time and take the FFT. Bin `k` maps to range `k × bin_spacing_m`.
/// Profiles are normalised by the window sum, so a tone of amplitude `a`
/// centred on a bin reads `a`.
pub fn range_fft(cube: &RadarCube) -> Result<RangeTimeMap, RadarError> {
    if cube.is_empty() {
        return Err(RadarError::EmptyCube);
    }
    let cfg = cube.config();
    let n = cfg.samples_per_chirp;
    let window = hann(n);
    let gain = window.iter().sum::<f64>() * cfg.chirps_per_frame as f64;
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

    let mut values = Vec::with_capacity(cube.frames() * n);
    let mut buf = vec![Complex64::default(); n];
    for f in 0..cube.frames() {
        buf.fill(Complex64::default());
        for c in 0..cfg.chirps_per_frame {
            for (b, z) in buf.iter_mut().zip(cube.chirp(f, c)) {
                *b += z;
            }
        }
        for (b, w) in buf.iter_mut().zip(&window) {
            *b *= w / gain;
        }
        fft.process_with_scratch(&mut buf, &mut scratch);
        values.extend_from_slice(&buf);
    }
    Ok(RangeTimeMap {
        values,
        bins: n,
        bin_spacing_m: cfg.range_bin_spacing_m(),
        frame_rate_hz: cfg.frame_rate_hz,
        frame_times_s: cube.frame_timestamps().to_vec(),
    })
}

/// Per-bin stationarity of the range profile.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticProfile {
    /// `10 log10` of the time-averaged power; `-inf` for bins without signal.
    pub mean_power_db: Vec<f64>,
    /// Coefficient of variation (std / mean) of the power over time; 0 for bins without signal.
    pub cov: Vec<f64>,
}

pub fn static_profile(map: &RangeTimeMap) -> Result<StaticProfile, RadarError> {
    let frames = map.frames();
    if frames < 2 {
        return Err(RadarError::TooFewFrames(frames));
    }
    let mean = map.mean_power();
    let mut var = vec![0.0; map.bins()];
    for f in 0..frames {
        for ((v, z), m) in var.iter_mut().zip(map.profile(f)).zip(&mean) {
            *v += (z.norm_sqr() - m).powi(2);
        }
    }
    let cov = var
        .iter()
        .zip(&mean)
        .map(|(v, &m)| if m > 0.0 { (v / frames as f64).sqrt() / m } else { 0.0 })
        .collect();
    let mean_power_db = mean.iter().map(|m| 10.0 * m.log10()).collect();
    Ok(StaticProfile { mean_power_db, cov })
}

/// Bin of strongest time-averaged power among bins whose centre lies in
/// `[min_m, max_m]`. Ties go to the nearer bin.
pub fn select_target_bin(map: &RangeTimeMap, min_m: f64, max_m: f64) -> Result<usize, RadarError> {
    let eps = 1e-12;
    let in_window: Vec<usize> = (0..map.bins())
        .filter(|&k| {
            let r = map.bin_range_m(k);
            r >= min_m - eps && r <= max_m + eps
        })
        .collect();
    let Some(&first) = in_window.first() else {
        return Err(RadarError::WindowEmpty { min_m, max_m });
    };
    let power = map.mean_power();
    Ok(in_window.into_iter().fold(first, |best, k| if power[k] > power[best] { k } else { best }))
}
