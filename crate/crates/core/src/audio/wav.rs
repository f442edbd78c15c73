use std::io::{Read, Seek, Write};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::{AudioError, AudioTrace, AUDIO_RATE_HZ};

fn check_spec(spec: &WavSpec) -> Result<(), AudioError> {
    let ok = spec.channels == 1
        && spec.bits_per_sample == 16
        && spec.sample_format == SampleFormat::Int
        && f64::from(spec.sample_rate) == AUDIO_RATE_HZ;
    if ok {
        Ok(())
    } else {
        Err(AudioError::UnsupportedFormat(format!(
            "expected 16-bit PCM mono at 44100 Hz, got {}-bit {:?} with {} channel(s) at {} Hz",
            spec.bits_per_sample, spec.sample_format, spec.channels, spec.sample_rate
        )))
    }
}

/// Read a 16-bit PCM mono 44.1 kHz WAV file; other formats are rejected.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioTrace, AudioError> {
    read_wav_from(WavReader::open(path)?)
}

pub fn read_wav_from<R: Read>(reader: WavReader<R>) -> Result<AudioTrace, AudioError> {
    check_spec(&reader.spec())?;
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| f64::from(v) / 32768.0))
        .collect::<Result<Vec<_>, _>>()?;
    AudioTrace::new(samples, AUDIO_RATE_HZ)
}

fn spec() -> WavSpec {
    WavSpec { channels: 1, sample_rate: AUDIO_RATE_HZ as u32, bits_per_sample: 16, sample_format: SampleFormat::Int }
}

fn to_i16(x: f64) -> i16 {
    (x * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

pub fn write_wav(trace: &AudioTrace, path: impl AsRef<Path>) -> Result<(), AudioError> {
    let mut w = WavWriter::create(path, spec())?;
    for &x in trace.samples() {
        w.write_sample(to_i16(x))?;
    }
    w.finalize()?;
    Ok(())
}

pub fn write_wav_to<W: Write + Seek>(trace: &AudioTrace, out: W) -> Result<(), AudioError> {
    let mut w = WavWriter::new(out, spec())?;
    for &x in trace.samples() {
        w.write_sample(to_i16(x))?;
    }
    w.finalize()?;
    Ok(())
}
