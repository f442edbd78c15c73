//! CSV export of intermediate and final products. Every file has a one-line
//! header. Floats are written in shortest round-trip form, so re-running a
//! computation reproduces files byte for byte.

use std::io::{Read, Write};

use crate::radar::{PhaseTrace, RangeTimeMap};
use crate::spectral::{RateSeries, Spectrogram};
use crate::Error;

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().from_writer(w)
}

/// `frame_time_s, bin_0_db, bin_1_db, ...` with power in dB per range bin.
pub fn write_range_time_map<W: Write>(map: &RangeTimeMap, w: W) -> Result<(), Error> {
    let mut out = writer(w);
    let mut header = vec!["frame_time_s".to_string()];
    header.extend((0..map.bins()).map(|k| format!("bin_{k}_db")));
    out.write_record(&header)?;
    for (f, t) in map.frame_times_s().iter().enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(map.profile(f).iter().map(|z| (10.0 * z.norm_sqr().log10()).to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// `frame_time_s, phase_rad`.
pub fn write_phase<W: Write>(trace: &PhaseTrace, frame_times_s: &[f64], w: W) -> Result<(), Error> {
    write_two_columns(("frame_time_s", "phase_rad"), frame_times_s, &trace.samples, w)
}

/// `time_s, envelope`.
pub fn write_envelope<W: Write>(samples: &[f64], rate_hz: f64, w: W) -> Result<(), Error> {
    let times: Vec<f64> = (0..samples.len()).map(|i| i as f64 / rate_hz).collect();
    write_two_columns(("time_s", "envelope"), &times, samples, w)
}

fn write_two_columns<W: Write>(names: (&str, &str), a: &[f64], b: &[f64], w: W) -> Result<(), Error> {
    let mut out = writer(w);
    out.write_record([names.0, names.1])?;
    for (x, y) in a.iter().zip(b) {
        out.write_record([x.to_string(), y.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// `time_s, <bpm>, <bpm>, ...`: one column per frequency bin, headed by its bpm.
pub fn write_spectrogram<W: Write>(spec: &Spectrogram, w: W) -> Result<(), Error> {
    write_spectrogram_band(spec, (f64::NEG_INFINITY, f64::INFINITY), w)
}

/// As [`write_spectrogram`], keeping only bins with `low <= |bpm| <= high`.
pub fn write_spectrogram_band<W: Write>(spec: &Spectrogram, band_bpm: (f64, f64), w: W) -> Result<(), Error> {
    let keep: Vec<usize> = (0..spec.bins())
        .filter(|&k| (band_bpm.0..=band_bpm.1).contains(&spec.freq_axis_bpm()[k].abs()))
        .collect();
    let mut out = writer(w);
    let mut header = vec!["time_s".to_string()];
    header.extend(keep.iter().map(|&k| format!("{}", spec.freq_axis_bpm()[k])));
    out.write_record(&header)?;
    for (i, t) in spec.time_axis_s().iter().enumerate() {
        let frame = spec.frame(i);
        let mut row = Vec::with_capacity(keep.len() + 1);
        row.push(t.to_string());
        row.extend(keep.iter().map(|&k| frame[k].to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// `time_s, rate_bpm, magnitude`.
pub fn write_rates<W: Write>(rates: &RateSeries, w: W) -> Result<(), Error> {
    let mut out = writer(w);
    out.write_record(["time_s", "rate_bpm", "magnitude"])?;
    for ((t, r), m) in rates.times_s.iter().zip(&rates.rates_bpm).zip(&rates.magnitudes) {
        out.write_record([t.to_string(), r.to_string(), m.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_rates<R: Read>(r: R) -> Result<RateSeries, Error> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    let headers = rdr.headers()?.clone();
    let expected = ["time_s", "rate_bpm", "magnitude"];
    if headers.len() != 3 || headers.iter().zip(expected).any(|(h, e)| h.trim() != e) {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("rate CSV header must be {}", expected.join(",")),
        )));
    }
    let mut out = RateSeries::default();
    for rec in rdr.deserialize::<(f64, f64, f64)>() {
        let (t, r, m) = rec?;
        out.times_s.push(t);
        out.rates_bpm.push(r);
        out.magnitudes.push(m);
    }
    Ok(out)
}

/// `time_s, displacement_m, rate_bpm` ground truth for a simulated subject.
pub fn write_truth<W: Write>(times_s: &[f64], displacement_m: &[f64], rate_bpm: &[f64], w: W) -> Result<(), Error> {
    let mut out = writer(w);
    out.write_record(["time_s", "displacement_m", "rate_bpm"])?;
    for ((t, d), r) in times_s.iter().zip(displacement_m).zip(rate_bpm) {
        out.write_record([t.to_string(), d.to_string(), r.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_round_trip() {
        let r = RateSeries { times_s: vec![29.975, 30.025], rates_bpm: vec![15.0, 16.0], magnitudes: vec![0.1, 1e-7] };
        let mut buf = Vec::new();
        write_rates(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), "time_s,rate_bpm,magnitude");
        assert_eq!(text.lines().count(), 3);
        assert_eq!(read_rates(&buf[..]).unwrap(), r);
    }

    #[test]
    fn rates_header_checked() {
        assert!(read_rates("a,b,c\n1,2,3\n".as_bytes()).is_err());
    }

    #[test]
    fn spectrogram_columns() {
        let s = Spectrogram::from_parts(vec![1.0, 2.0, 3.0, 4.0], vec![0.0, 1.0], vec![0.5, 1.5], false);
        let mut buf = Vec::new();
        write_spectrogram(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "time_s,0,1\n0.5,1,2\n1.5,3,4\n");
    }
}
