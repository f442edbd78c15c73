use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, Context};
use resprad::audio::{read_wav, write_wav, AudioPipeline};
use resprad::export;
use resprad::ingest::{decode_cube, load_capture, reassemble, send_datagrams, write_capture, CaptureListener};
use resprad::radar::{static_profile, RadarPipeline};
use resprad::sim::{chest_displacement, datagram_stream, synth_audio, synth_cube, BreathAudioSpec, SceneSpec};
use resprad::spectral::{compare_rates, RateSeries};
use resprad::RadarConfig;
use serde_json::json;

use crate::args::*;
use crate::manifest::{Job, RunManifest};
use crate::{Classify, Failure};

type Outcome = Result<(), Failure>;

fn absolute(path: &Path) -> Result<PathBuf, Failure> {
    fs::canonicalize(path).with_context(|| format!("cannot open {}", path.display())).input()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).input()?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display())).input()
}

fn read_config(path: Option<&Path>) -> Result<RadarConfig, Failure> {
    let config = match path {
        Some(p) => read_json(p)?,
        None => RadarConfig::default(),
    };
    config.validate().context("invalid radar configuration").input()?;
    Ok(config)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    let path = dir.join(name);
    File::create(&path).map(BufWriter::new).with_context(|| format!("creating {}", path.display())).processing()
}

fn write_json(dir: &Path, name: &str, value: &serde_json::Value) -> Outcome {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, value).processing()?;
    writeln!(w).and_then(|_| w.flush()).processing()
}

fn output_dir(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display())).processing()
}

fn read_rates_file(path: &Path) -> Result<RateSeries, Failure> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display())).input()?;
    export::read_rates(BufReader::new(file)).with_context(|| format!("reading {}", path.display())).input()
}

pub fn simulate(a: SimulateArgs) -> Outcome {
    let mut inputs = Vec::new();
    let mut scene = match &a.scene {
        Some(p) => {
            inputs.push(absolute(p)?);
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).input()?;
            SceneSpec::from_json(&text).with_context(|| format!("scene {}", p.display())).input()?
        }
        None => SceneSpec::default(),
    };
    if let Some(seed) = a.seed {
        scene.seed = seed;
    }
    if let Some(p) = &a.config {
        inputs.push(absolute(p)?);
    }
    let config = read_config(a.config.as_deref())?;
    execute(Job::Simulate { scene, config, duration_s: a.duration_s }, inputs, &a.out, None)
}

pub fn simulate_audio(a: SimulateAudioArgs) -> Outcome {
    let spec = BreathAudioSpec {
        resp_rate_bpm: a.rate_bpm,
        exhale_only: !a.both_sounds,
        burst_duration_s: a.burst_s,
        noise_db: a.noise_db.unwrap_or(f64::NEG_INFINITY),
        seed: a.seed,
        burst_amplitude: a.burst_amplitude,
    };
    execute(Job::SimulateAudio { spec, duration_s: a.duration_s }, Vec::new(), &a.out, None)
}

pub fn process_radar(a: ProcessRadarArgs) -> Outcome {
    let pipeline = RadarPipeline {
        min_range_m: a.min_range_m,
        max_range_m: a.max_range_m,
        clutter: a.clutter,
        detrend: !a.no_detrend,
        variant: a.variant,
        stft: a.spectral.stft(),
        band_bpm: a.spectral.band(),
    };
    let inputs = vec![absolute(&a.capture)?];
    execute(Job::ProcessRadar { pipeline, write_map: a.write_map }, inputs, &a.out, None)
}

pub fn process_audio(a: ProcessAudioArgs) -> Outcome {
    let pipeline = AudioPipeline {
        decimator: a.decimator,
        rectifier: a.rectifier,
        stft: a.spectral.stft(),
        band_bpm: a.spectral.band(),
    };
    let inputs = vec![absolute(&a.wav)?];
    execute(Job::ProcessAudio { pipeline }, inputs, &a.out, None)
}

pub fn compare(a: CompareArgs) -> Outcome {
    let inputs = vec![absolute(&a.rates_a)?, absolute(&a.rates_b)?];
    match &a.out {
        Some(out) => execute(Job::Compare, inputs, out, None),
        None => {
            let summary = comparison(&inputs)?;
            println!("{}", serde_json::to_string(&summary).processing()?);
            Ok(())
        }
    }
}

fn comparison(inputs: &[PathBuf]) -> Result<serde_json::Value, Failure> {
    let [a, b] = inputs else {
        return Err(Failure::Input(anyhow!("compare needs exactly two rate files")));
    };
    let (ra, rb) = (read_rates_file(a)?, read_rates_file(b)?);
    let c = compare_rates(&ra, &rb).processing()?;
    Ok(json!({
        "mae_bpm": c.mae_bpm,
        "rmse_bpm": c.rmse_bpm,
        "within_2bpm_fraction": c.within_2bpm_fraction,
        "n_instants": c.n_instants,
        "a": { "mean_bpm": ra.mean_bpm(), "std_bpm": ra.std_bpm() },
        "b": { "mean_bpm": rb.mean_bpm(), "std_bpm": rb.std_bpm() },
    }))
}

pub fn listen(a: ListenArgs) -> Outcome {
    let config = read_config(a.config.as_deref())?;
    let listener = CaptureListener::bind((a.bind.as_str(), a.port)).context("binding UDP socket").input()?;
    eprintln!("listening on {}", listener.local_addr().processing()?);
    let (datagrams, listen_report) =
        listener.receive(a.max_datagrams, Duration::from_millis(a.idle_ms)).context("receiving").processing()?;
    let (stream, loss) = reassemble(datagrams).context("reassembling stream").processing()?;
    // Keep whole frames; a trailing partial frame is reported, not decoded.
    let whole = stream.len() / config.frame_bytes() * config.frame_bytes();
    let cube = decode_cube(&stream[..whole], &config).processing()?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        output_dir(dir)?;
    }
    write_capture(&cube, &a.out).with_context(|| format!("writing {}", a.out.display())).processing()?;
    let report = json!({
        "frames": cube.frames(),
        "trailing_bytes": stream.len() - whole,
        "malformed_datagrams": listen_report.malformed,
        "loss": loss,
    });
    println!("{}", serde_json::to_string(&report).processing()?);
    Ok(())
}

pub fn replay(a: ReplayArgs) -> Outcome {
    let cube = load_capture(&a.capture).with_context(|| format!("loading {}", a.capture.display())).input()?;
    let datagrams = datagram_stream(&cube);
    let sent = send_datagrams(a.target, &datagrams).context("sending").processing()?;
    eprintln!("sent {sent} datagrams ({} frames) to {}", cube.frames(), a.target);
    Ok(())
}

pub fn rerun(a: RerunArgs) -> Outcome {
    let m = RunManifest::load(&a.manifest).input()?;
    let out = a.out.unwrap_or_else(|| m.out_dir.clone());
    let expected = match m.job {
        Job::ProcessRadar { .. } => m.radar_config,
        _ => None,
    };
    execute(m.job, m.inputs, &out, expected)
}

/// Run a job and write its outputs and manifest into `out`. For radar
/// processing, `expected_config` guards against a capture replaced since
/// the manifest was written.
fn execute(job: Job, inputs: Vec<PathBuf>, out: &Path, expected_config: Option<RadarConfig>) -> Outcome {
    let mut radar_config = None;
    match &job {
        Job::Simulate { scene, config, duration_s } => {
            let cube = synth_cube(scene, config, *duration_s).input()?;
            output_dir(out)?;
            write_capture(&cube, out.join("capture.rvsc")).processing()?;
            let times = cube.frame_timestamps();
            let (disp, rate): (Vec<f64>, Vec<f64>) = match scene.targets.first() {
                Some((m, _)) => times.iter().map(|&t| (chest_displacement(m, t), m.rate_at(t))).unzip(),
                None => (vec![0.0; times.len()], vec![0.0; times.len()]),
            };
            export::write_truth(times, &disp, &rate, create(out, "truth.csv")?).processing()?;
            fs::write(out.join("scene.json"), scene.to_json() + "\n").processing()?;
            eprintln!("wrote {} frames to {}", cube.frames(), out.join("capture.rvsc").display());
        }
        Job::SimulateAudio { spec, duration_s } => {
            let audio = synth_audio(spec, *duration_s).input()?;
            output_dir(out)?;
            write_wav(&audio, out.join("audio.wav")).processing()?;
            eprintln!("wrote {:.1} s of audio to {}", audio.duration_s(), out.join("audio.wav").display());
        }
        Job::ProcessRadar { pipeline, write_map } => {
            let path = inputs.first().ok_or_else(|| Failure::Input(anyhow!("no capture input")))?;
            let cube = load_capture(path).with_context(|| format!("loading {}", path.display())).input()?;
            if let Some(expected) = expected_config {
                if expected != *cube.config() {
                    return Err(Failure::Input(anyhow!("{} no longer matches the manifest's radar config", path.display())));
                }
            }
            radar_config = Some(*cube.config());
            let result = pipeline.run(&cube).context("radar pipeline").processing()?;
            output_dir(out)?;
            export::write_rates(&result.rates, create(out, "rates.csv")?).processing()?;
            export::write_spectrogram_band(&result.spectrogram, pipeline.band_bpm, create(out, "spectrogram.csv")?)
                .processing()?;
            if let Some(phase) = &result.phase {
                export::write_phase(phase, result.map.frame_times_s(), create(out, "phase.csv")?).processing()?;
            }
            let profile = static_profile(&result.map).processing()?;
            let mut w = create(out, "range_profile.csv")?;
            writeln!(w, "bin,range_m,mean_power_db,cov").processing()?;
            for (k, (p, c)) in profile.mean_power_db.iter().zip(&profile.cov).enumerate() {
                writeln!(w, "{k},{},{p},{c}", result.map.bin_range_m(k)).processing()?;
            }
            w.flush().processing()?;
            if *write_map {
                export::write_range_time_map(&result.map, create(out, "range_time.csv")?).processing()?;
            }
            let summary = json!({
                "target_bin": result.target_bin,
                "target_range_m": result.target_range_m,
                "frames": result.map.frames(),
                "instants": result.rates.len(),
                "mean_bpm": result.rates.mean_bpm(),
                "std_bpm": result.rates.std_bpm(),
            });
            write_json(out, "summary.json", &summary)?;
            println!("{}", serde_json::to_string(&summary).processing()?);
        }
        Job::ProcessAudio { pipeline } => {
            let path = inputs.first().ok_or_else(|| Failure::Input(anyhow!("no audio input")))?;
            let audio = read_wav(path).with_context(|| format!("reading {}", path.display())).input()?;
            let result = pipeline.run(&audio).context("audio pipeline").processing()?;
            output_dir(out)?;
            export::write_rates(&result.rates, create(out, "rates.csv")?).processing()?;
            export::write_spectrogram_band(&result.spectrogram, pipeline.band_bpm, create(out, "spectrogram.csv")?)
                .processing()?;
            export::write_envelope(&result.envelope.samples, result.envelope.rate_hz, create(out, "envelope.csv")?)
                .processing()?;
            let summary = json!({
                "samples": audio.len(),
                "instants": result.rates.len(),
                "mean_bpm": result.rates.mean_bpm(),
                "std_bpm": result.rates.std_bpm(),
            });
            write_json(out, "summary.json", &summary)?;
            println!("{}", serde_json::to_string(&summary).processing()?);
        }
        Job::Compare => {
            let summary = comparison(&inputs)?;
            output_dir(out)?;
            write_json(out, "comparison.json", &summary)?;
            println!("{}", serde_json::to_string(&summary).processing()?);
        }
    }
    let out_abs = fs::canonicalize(out).processing()?;
    RunManifest::new(job, inputs, radar_config, &out_abs).write(out).processing()
}
