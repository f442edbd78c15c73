//! The guide in `book/`, compiled so its code listings run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/capture-format.md")]
pub mod capture_format {}

#[doc = include_str!("../../../book/src/range-and-phase.md")]
pub mod range_and_phase {}

#[doc = include_str!("../../../book/src/audio-envelope.md")]
pub mod audio_envelope {}

#[doc = include_str!("../../../book/src/stft-and-rate.md")]
pub mod stft_and_rate {}

#[doc = include_str!("../../../book/src/simulator.md")]
pub mod simulator {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
