//! Respiration-rate estimation from short-range FMCW radar, with a headset
//! audio reference pipeline and a synthetic scene simulator.
//!
//! The crate is organised as the processing chain runs:
//!
//! ```text
//! UDP datagrams ─► ingest ─► RadarCube ─► radar (range FFT, bin selection,
//!                                          clutter removal, phase) ─┐
//!                                                                    ├─► spectral (STFT, argmax rate)
//! 44.1 kHz WAV ─► audio (decimate to 20 Hz, envelope) ──────────────┘
//! ```
//!
//! [`sim`] generates beat-signal cubes and breathing audio with known ground
//! truth, and is what the test suites use as an oracle.

// Negated float comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod export;
pub mod ingest;
pub mod radar;
pub mod audio;
pub mod sim;
pub mod spectral;

pub use config::RadarConfig;
pub use error::Error;
pub use ingest::RadarCube;

/// Propagation speed used for every range and wavelength conversion (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub use num_complex::Complex64;
