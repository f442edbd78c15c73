use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::window::WindowShape;
use super::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StftParams {
    pub window_s: f64,
    pub overlap_s: f64,
    pub window_shape: WindowShape,
    pub sample_rate_hz: f64,
    /// DFT length as a multiple of the window length. Display only; 1 keeps
    /// the bins at exactly `60 / window_s` bpm.
    #[serde(default = "one")]
    pub pad_factor: usize,
}

fn one() -> usize {
    1
}

impl Default for StftParams {
    fn default() -> Self {
        Self {
            window_s: 60.0,
            overlap_s: 59.95,
            window_shape: WindowShape::Blackman,
            sample_rate_hz: 20.0,
            pad_factor: 1,
        }
    }
}

impl StftParams {
    pub fn validate(&self) -> Result<(), SpectralError> {
        let bad = |m: String| Err(SpectralError::InvalidParams(m));
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return bad(format!("sample rate {} Hz", self.sample_rate_hz));
        }
        if !(self.window_s.is_finite() && self.window_s > 0.0) {
            return bad(format!("window length {} s", self.window_s));
        }
        if !(self.overlap_s.is_finite() && self.overlap_s >= 0.0 && self.overlap_s < self.window_s) {
            return bad(format!("overlap {} s must lie in [0, window_s)", self.overlap_s));
        }
        let n = self.window_s * self.sample_rate_hz;
        if (n - n.round()).abs() > 1e-6 || n.round() < 2.0 {
            return bad(format!("window of {n} samples is not a whole number of at least 2"));
        }
        if self.hop_samples_raw() < 1 {
            return bad("window advance rounds to zero samples".into());
        }
        if self.pad_factor == 0 {
            return bad("pad factor must be at least 1".into());
        }
        Ok(())
    }

    pub fn window_samples(&self) -> usize {
        (self.window_s * self.sample_rate_hz).round() as usize
    }

    fn hop_samples_raw(&self) -> i64 {
        ((self.window_s - self.overlap_s) * self.sample_rate_hz).round() as i64
    }

    pub fn hop_samples(&self) -> usize {
        self.hop_samples_raw().max(0) as usize
    }

    pub fn fft_len(&self) -> usize {
        self.window_samples() * self.pad_factor
    }

    /// Width of one DFT bin in bpm.
    pub fn bin_spacing_bpm(&self) -> f64 {
        60.0 * self.sample_rate_hz / self.fft_len() as f64
    }

    /// Number of spectra produced for a trace of `len` samples.
    pub fn frame_count(&self, len: usize) -> usize {
        let n = self.window_samples();
        if len < n {
            0
        } else {
            (len - n) / self.hop_samples() + 1
        }
    }
}

/// Magnitude time-frequency map, row-major `[time_frame][freq_bin]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    magnitudes: Vec<f64>,
    freq_axis_bpm: Vec<f64>,
    time_axis_s: Vec<f64>,
    complex_input: bool,
}

impl Spectrogram {
    pub fn from_parts(
        magnitudes: Vec<f64>,
        freq_axis_bpm: Vec<f64>,
        time_axis_s: Vec<f64>,
        complex_input: bool,
    ) -> Self {
        assert_eq!(magnitudes.len(), freq_axis_bpm.len() * time_axis_s.len());
        Self { magnitudes, freq_axis_bpm, time_axis_s, complex_input }
    }

    pub fn freq_axis_bpm(&self) -> &[f64] {
        &self.freq_axis_bpm
    }

    pub fn time_axis_s(&self) -> &[f64] {
        &self.time_axis_s
    }

    pub fn is_complex_input(&self) -> bool {
        self.complex_input
    }

    pub fn frames(&self) -> usize {
        self.time_axis_s.len()
    }

    pub fn bins(&self) -> usize {
        self.freq_axis_bpm.len()
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        let b = self.bins();
        &self.magnitudes[t * b..(t + 1) * b]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            magnitudes: self.magnitudes.iter().map(|m| m * factor).collect(),
            ..self.clone()
        }
    }
}

/// A 20 Hz trace: real (phase, envelope) or complex (slow-time reflection).
#[derive(Debug, Clone, Copy)]
pub enum StftInput<'a> {
    Real(&'a [f64]),
    Complex(&'a [Complex64]),
}

impl<'a> From<&'a [f64]> for StftInput<'a> {
    fn from(v: &'a [f64]) -> Self {
        StftInput::Real(v)
    }
}

impl<'a> From<&'a [Complex64]> for StftInput<'a> {
    fn from(v: &'a [Complex64]) -> Self {
        StftInput::Complex(v)
    }
}

pub fn stft<'a>(trace: impl Into<StftInput<'a>>, params: &StftParams) -> Result<Spectrogram, SpectralError> {
    match trace.into() {
        StftInput::Real(x) => stft_real(x, params),
        StftInput::Complex(x) => stft_complex(x, params),
    }
}

/// One-sided STFT; bins `0..=N/2` on a `k × bin_spacing` bpm axis.
pub fn stft_real(trace: &[f64], params: &StftParams) -> Result<Spectrogram, SpectralError> {
    let as_complex: Vec<Complex64> = trace.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let n_fft = params.fft_len();
    let keep: Vec<usize> = (0..=n_fft / 2).collect();
    run(&as_complex, params, &keep, false)
}

/// Two-sided STFT; bins ordered from `-N/2` to `N/2 - 1` on a signed bpm axis.
pub fn stft_complex(trace: &[Complex64], params: &StftParams) -> Result<Spectrogram, SpectralError> {
    let n_fft = params.fft_len();
    let half = n_fft / 2;
    let keep: Vec<usize> = (half..n_fft).chain(0..half).collect();
    run(trace, params, &keep, true)
}

fn run(trace: &[Complex64], params: &StftParams, keep: &[usize], complex_input: bool) -> Result<Spectrogram, SpectralError> {
    params.validate()?;
    let n = params.window_samples();
    if trace.len() < n {
        return Err(SpectralError::TraceTooShort { len: trace.len(), window: n });
    }
    let n_fft = params.fft_len();
    let hop = params.hop_samples();
    let frames = params.frame_count(trace.len());
    let window = params.window_shape.coefficients(n);
    let gain: f64 = window.iter().sum();
    let spacing = params.bin_spacing_bpm();

    let freq_axis_bpm = keep
        .iter()
        .map(|&k| {
            let signed = if complex_input && k >= n_fft / 2 { k as f64 - n_fft as f64 } else { k as f64 };
            signed * spacing
        })
        .collect();
    let time_axis_s = (0..frames)
        .map(|f| (f * hop) as f64 / params.sample_rate_hz + (n - 1) as f64 / (2.0 * params.sample_rate_hz))
        .collect();

    let fft = FftPlanner::new().plan_fft_forward(n_fft);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut buf = vec![Complex64::default(); n_fft];
    let mut magnitudes = Vec::with_capacity(frames * keep.len());
    for f in 0..frames {
        let seg = &trace[f * hop..f * hop + n];
        let mean = seg.iter().sum::<Complex64>() / n as f64;
        for (dst, (&x, &w)) in buf.iter_mut().zip(seg.iter().zip(&window)) {
            *dst = (x - mean) * w;
        }
        buf[n..].fill(Complex64::default());
        fft.process_with_scratch(&mut buf, &mut scratch);
        magnitudes.extend(keep.iter().map(|&k| buf[k].norm() / gain));
    }
    Ok(Spectrogram { magnitudes, freq_axis_bpm, time_axis_s, complex_input })
}
