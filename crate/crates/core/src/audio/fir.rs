//! Kaiser-window FIR low-pass design and linear-phase filtering.

use std::f64::consts::PI;

/// Zeroth-order modified Bessel function of the first kind.
pub fn bessel_i0(x: f64) -> f64 {
    let q = (x / 2.0).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

pub fn kaiser_window(len: usize, beta: f64) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let m = (len - 1) as f64;
    let denom = bessel_i0(beta);
    (0..len)
        .map(|n| {
            let r = 2.0 * n as f64 / m - 1.0;
            bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom
        })
        .collect()
}

/// Kaiser's empirical shape parameter for a stopband attenuation in dB.
pub fn kaiser_beta(atten_db: f64) -> f64 {
    if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * (atten_db - 21.0).powf(0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    }
}

/// Kaiser's estimate of the number of taps for a transition width given as
/// a fraction of the sample rate. Always odd.
pub fn kaiser_num_taps(atten_db: f64, transition: f64) -> usize {
    let n = ((atten_db - 7.95) / (14.36 * transition)).ceil().max(1.0) as usize + 1;
    n | 1
}

/// Windowed-sinc low-pass with unit DC gain.
pub fn lowpass_taps(num_taps: usize, cutoff_hz: f64, rate_hz: f64, beta: f64) -> Vec<f64> {
    let fc = cutoff_hz / rate_hz;
    let mid = (num_taps - 1) as f64 / 2.0;
    let win = kaiser_window(num_taps, beta);
    let mut taps: Vec<f64> = win
        .iter()
        .enumerate()
        .map(|(n, w)| {
            let x = n as f64 - mid;
            let sinc = if x == 0.0 { 2.0 * fc } else { (2.0 * PI * fc * x).sin() / (PI * x) };
            w * sinc
        })
        .collect();
    let dc: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= dc);
    taps
}

/// |H(f)| of an FIR filter.
pub fn magnitude_response(taps: &[f64], freq_hz: f64, rate_hz: f64) -> f64 {
    let w = 2.0 * PI * freq_hz / rate_hz;
    let (re, im) = taps.iter().enumerate().fold((0.0, 0.0), |(re, im), (n, h)| {
        let p = w * n as f64;
        (re + h * p.cos(), im - h * p.sin())
    });
    re.hypot(im)
}

pub fn magnitude_response_db(taps: &[f64], freq_hz: f64, rate_hz: f64) -> f64 {
    20.0 * magnitude_response(taps, freq_hz, rate_hz).log10()
}

/// Linear-phase low-pass meeting a passband/stopband specification.
#[derive(Debug, Clone, PartialEq)]
pub struct LowpassSpec {
    pub pass_hz: f64,
    pub stop_hz: f64,
    pub atten_db: f64,
    /// Largest passband loss allowed (dB, positive).
    pub pass_loss_db: f64,
    pub rate_hz: f64,
}

impl LowpassSpec {
    /// Kaiser design, lengthened until the response meets the spec on a dense
    /// frequency grid.
    pub fn design(&self) -> Vec<f64> {
        let beta = kaiser_beta(self.atten_db);
        let cutoff = (self.pass_hz + self.stop_hz) / 2.0;
        let mut n = kaiser_num_taps(self.atten_db, (self.stop_hz - self.pass_hz) / self.rate_hz);
        loop {
            let taps = lowpass_taps(n, cutoff, self.rate_hz, beta);
            if self.is_met_by(&taps) || n > 1 << 16 {
                return taps;
            }
            n += 2;
        }
    }

    pub fn is_met_by(&self, taps: &[f64]) -> bool {
        let grid = 2000;
        let nyq = self.rate_hz / 2.0;
        let pass_ok = (0..=grid)
            .map(|i| self.pass_hz * i as f64 / grid as f64)
            .all(|f| magnitude_response_db(taps, f, self.rate_hz) >= -self.pass_loss_db);
        let stop_ok = (0..=grid)
            .map(|i| self.stop_hz + (nyq - self.stop_hz) * i as f64 / grid as f64)
            .all(|f| magnitude_response_db(taps, f, self.rate_hz) <= -self.atten_db);
        pass_ok && stop_ok
    }
}

/// Filter with the group delay of a symmetric odd-length FIR removed, so
/// output sample `n` is the filter centred on input `n`. The input is
/// extended by holding its edge values.
pub fn filter_centered(taps: &[f64], x: &[f64]) -> Vec<f64> {
    filter_centered_at(taps, x, 1)
}

/// [`filter_centered`] evaluated only at every `step`-th input index.
pub fn filter_centered_at(taps: &[f64], x: &[f64], step: usize) -> Vec<f64> {
    assert!(taps.len() % 2 == 1, "linear-phase filter needs an odd tap count");
    if x.is_empty() {
        return Vec::new();
    }
    let delay = (taps.len() / 2) as isize;
    let last = x.len() as isize - 1;
    (0..x.len() / step)
        .map(|m| {
            let centre = (m * step) as isize;
            taps.iter()
                .enumerate()
                .map(|(k, h)| h * x[(centre + k as isize - delay).clamp(0, last) as usize])
                .sum()
        })
        .collect()
}
