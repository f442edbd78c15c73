//! Capture-card wire format, datagram reassembly and the on-disk capture
//! container.
//!
//! Wire format: each UDP datagram carries a 10-byte little-endian header
//! (`u32` sequence number, `u48` cumulative byte offset) followed by at most
//! 1456 payload bytes. The reassembled byte stream holds interleaved `i16`
//! I/Q pairs, frame-major, then chirp, then rx channel, then fast-time sample.

mod container;
mod cube;
mod datagram;
mod listener;
mod reassembly;

pub use container::{load_capture, read_capture, write_capture, write_capture_to, CAPTURE_MAGIC, CAPTURE_VERSION};
pub use cube::{decode_cube, decode_cube_exact, encode_cube, quantize, RadarCube};
pub use datagram::{parse_datagram, Datagram, HEADER_LEN, MAX_BYTE_COUNT, MAX_PAYLOAD};
pub use listener::{send_datagrams, CaptureListener, ListenReport, DEFAULT_PORT};
pub use reassembly::{reassemble, LossReport, Reassembler};

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("datagram of {len} bytes is too short for the 10-byte header plus payload")]
    TooShort { len: usize },
    #[error("datagram payload of {len} bytes exceeds the 1456-byte maximum")]
    PayloadTooLarge { len: usize },
    #[error("byte count {0} does not fit in 48 bits")]
    ByteCountOverflow(u64),
    #[error("no datagrams to reassemble")]
    NoDatagrams,
    #[error("sequence number {seq} received twice with differing payloads")]
    DuplicateSeq { seq: u32 },
    #[error("byte count {byte_count} of seq {seq} overlaps data ending at offset {expected_min}")]
    NonMonotonicByteCount { seq: u32, byte_count: u64, expected_min: u64 },
    #[error("byte count {byte_count} of seq {seq} implies {missing_bytes} missing bytes for {missing_datagrams} missing datagrams")]
    InconsistentGap { seq: u32, byte_count: u64, missing_datagrams: u64, missing_bytes: u64 },
    #[error("reassembled stream of {actual} bytes exceeds the {limit}-byte limit")]
    StreamTooLarge { limit: u64, actual: u64 },
    #[error("stream ends with a partial frame ({trailing} of {frame_bytes} bytes)")]
    TruncatedFrame { trailing: usize, frame_bytes: usize },
    #[error("stream holds {actual} bytes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("bad capture magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported capture version {0}")]
    UnsupportedVersion(u16),
    #[error("capture header does not match its contents: {0}")]
    HeaderCubeMismatch(String),
    #[error("invalid radar configuration: {0}")]
    InvalidConfig(#[from] ConfigError),
    #[error("cube data has {actual} samples, configuration needs {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("frame timestamps invalid: {0}")]
    InvalidTimestamps(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
