use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowShape {
    #[default]
    Blackman,
    Hann,
    Rectangular,
}

impl WindowShape {
    /// Symmetric window of length `n`.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            WindowShape::Rectangular => vec![1.0; n],
            WindowShape::Hann => hann(n),
            WindowShape::Blackman => blackman(n),
        }
    }
}

impl fmt::Display for WindowShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WindowShape::Blackman => "blackman",
            WindowShape::Hann => "hann",
            WindowShape::Rectangular => "rectangular",
        })
    }
}

impl FromStr for WindowShape {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "blackman" => Ok(WindowShape::Blackman),
            "hann" | "hanning" => Ok(WindowShape::Hann),
            "rectangular" | "rect" | "boxcar" => Ok(WindowShape::Rectangular),
            other => Err(format!("unknown window shape `{other}` (blackman, hann, rectangular)")),
        }
    }
}

fn cosine_sum(n: usize, a: &[f64]) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = 2.0 * PI * i as f64 / m;
            a.iter()
                .enumerate()
                .map(|(k, ak)| if k % 2 == 0 { 1.0 } else { -1.0 } * ak * (k as f64 * x).cos())
                .sum()
        })
        .collect()
}

pub fn hann(n: usize) -> Vec<f64> {
    cosine_sum(n, &[0.5, 0.5])
}

pub fn blackman(n: usize) -> Vec<f64> {
    cosine_sum(n, &[0.42, 0.5, 0.08])
}
