use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::cube::{decode_cube_exact, encode_cube, RadarCube};
use super::IngestError;
use crate::config::{ConfigError, RadarConfig};

pub const CAPTURE_MAGIC: [u8; 4] = *b"RVSC";
pub const CAPTURE_VERSION: u16 = 1;

/// Write the capture container:
///
/// ```text
/// "RVSC" | u16 version | 8 x u64/f64 RadarConfig | u64 frames | sample stream | frames x f64 timestamps
/// ```
///
/// All fields little-endian. The config fields are, in order: carrier, chirp
/// slope, ADC rate (f64), samples per chirp, chirps per frame (u64), frame
/// rate (f64), rx channels (u64), bandwidth (f64).
pub fn write_capture_to<W: Write>(cube: &RadarCube, mut w: W) -> Result<(), IngestError> {
    let cfg = cube.config();
    w.write_all(&CAPTURE_MAGIC)?;
    w.write_all(&CAPTURE_VERSION.to_le_bytes())?;
    w.write_all(&cfg.carrier_hz.to_le_bytes())?;
    w.write_all(&cfg.chirp_slope_hz_per_s.to_le_bytes())?;
    w.write_all(&cfg.adc_rate_hz.to_le_bytes())?;
    w.write_all(&(cfg.samples_per_chirp as u64).to_le_bytes())?;
    w.write_all(&(cfg.chirps_per_frame as u64).to_le_bytes())?;
    w.write_all(&cfg.frame_rate_hz.to_le_bytes())?;
    w.write_all(&(cfg.rx_channels as u64).to_le_bytes())?;
    w.write_all(&cfg.bandwidth_hz().to_le_bytes())?;
    w.write_all(&(cube.frames() as u64).to_le_bytes())?;
    w.write_all(&encode_cube(cube))?;
    for t in cube.frame_timestamps() {
        w.write_all(&t.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_capture(cube: &RadarCube, path: impl AsRef<Path>) -> Result<(), IngestError> {
    write_capture_to(cube, BufWriter::new(File::create(path)?))
}

fn read_array<R: Read, const N: usize>(r: &mut R, what: &str) -> Result<[u8; N], IngestError> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => IngestError::HeaderCubeMismatch(format!("file ends inside {what}")),
        _ => IngestError::Io(e),
    })?;
    Ok(buf)
}

fn read_f64<R: Read>(r: &mut R, what: &str) -> Result<f64, IngestError> {
    read_array::<_, 8>(r, what).map(f64::from_le_bytes)
}

fn read_u64<R: Read>(r: &mut R, what: &str) -> Result<u64, IngestError> {
    read_array::<_, 8>(r, what).map(u64::from_le_bytes)
}

fn read_count<R: Read>(r: &mut R, what: &str) -> Result<usize, IngestError> {
    let v = read_u64(r, what)?;
    usize::try_from(v).map_err(|_| IngestError::HeaderCubeMismatch(format!("{what} = {v} is out of range")))
}

pub fn read_capture<R: Read>(mut r: R) -> Result<RadarCube, IngestError> {
    let magic = read_array::<_, 4>(&mut r, "magic")?;
    if magic != CAPTURE_MAGIC {
        return Err(IngestError::BadMagic(magic));
    }
    let version = u16::from_le_bytes(read_array::<_, 2>(&mut r, "version")?);
    if version != CAPTURE_VERSION {
        return Err(IngestError::UnsupportedVersion(version));
    }
    let config = RadarConfig {
        carrier_hz: read_f64(&mut r, "carrier")?,
        chirp_slope_hz_per_s: read_f64(&mut r, "chirp slope")?,
        adc_rate_hz: read_f64(&mut r, "adc rate")?,
        samples_per_chirp: read_count(&mut r, "samples per chirp")?,
        chirps_per_frame: read_count(&mut r, "chirps per frame")?,
        frame_rate_hz: read_f64(&mut r, "frame rate")?,
        rx_channels: read_count(&mut r, "rx channels")?,
    };
    let bandwidth = read_f64(&mut r, "bandwidth")?;
    config.validate()?;
    let derived = config.bandwidth_hz();
    if !((bandwidth - derived).abs() <= 1e-9 * derived) {
        return Err(ConfigError::BandwidthMismatch { declared: bandwidth, derived }.into());
    }
    let frames = read_count(&mut r, "frame count")?;

    let stream_len = frames
        .checked_mul(config.frame_bytes())
        .ok_or_else(|| IngestError::HeaderCubeMismatch(format!("{frames} frames overflow")))?;
    let mut stream = Vec::new();
    (&mut r).take(stream_len as u64).read_to_end(&mut stream)?;
    if stream.len() != stream_len {
        return Err(IngestError::HeaderCubeMismatch(format!(
            "header declares {frames} frames ({stream_len} bytes) but only {} sample bytes follow",
            stream.len()
        )));
    }
    let mut ts_bytes = Vec::new();
    (&mut r).take(frames as u64 * 8).read_to_end(&mut ts_bytes)?;
    if ts_bytes.len() != frames * 8 {
        return Err(IngestError::HeaderCubeMismatch("timestamp array is truncated".into()));
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(IngestError::HeaderCubeMismatch("trailing bytes after timestamps".into()));
    }
    let timestamps = ts_bytes
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();

    let decoded = decode_cube_exact(&stream, &config, frames)?;
    RadarCube::new(config, decoded.data().to_vec(), timestamps)
}

pub fn load_capture(path: impl AsRef<Path>) -> Result<RadarCube, IngestError> {
    read_capture(BufReader::new(File::open(path)?))
}
