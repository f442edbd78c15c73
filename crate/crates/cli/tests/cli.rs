use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use resprad::export::read_rates;
use resprad::ingest::load_capture;
use resprad::spectral::RateSeries;

fn resprad(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resprad")).args(args).current_dir(cwd).output().expect("spawn resprad")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = resprad(args, cwd);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rates(path: &Path) -> RateSeries {
    read_rates(fs::File::open(path).unwrap()).unwrap()
}

fn write_scene(dir: &Path, name: &str, amplitude_m: f64) -> String {
    let scene = format!(
        r#"{{"targets": [[{{"base_range_m": 0.5, "resp_rate_bpm": 15.0, "resp_amplitude_m": {amplitude_m}}}, 1.0]],
            "static_reflectors": [[1.5, 0.5]], "snr_db": 30.0, "seed": 3}}"#
    );
    fs::write(dir.join(name), scene).unwrap();
    name.to_string()
}

#[test]
fn default_scene_six_minutes_is_7200_frames() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["simulate", "--duration-s", "360", "--out", "sim"], dir.path());
    let cube = load_capture(dir.path().join("sim/capture.rvsc")).unwrap();
    assert_eq!(cube.frames(), 7200);
    let truth = fs::read_to_string(dir.path().join("sim/truth.csv")).unwrap();
    assert_eq!(truth.lines().next(), Some("time_s,displacement_m,rate_bpm"));
    assert_eq!(truth.lines().count(), 7201);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(resprad(&["simulate", "--duration-s", "0", "--out", "x"], dir.path()).status.code(), Some(2));
    assert_eq!(resprad(&["process-radar", "missing.rvsc", "--out", "y"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.json"), r#"{"targets": [], "snr_db": 30, "static_reflectors": [[9.0, 1.0]]}"#).unwrap();
    let out = resprad(&["simulate", "--scene", "bad.json", "--out", "z"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    assert_eq!(resprad(&["process-audio", "bad.json", "--out", "w"], dir.path()).status.code(), Some(2));
    assert_eq!(resprad(&["process-radar", "x", "--out", "y", "--window-shape", "kaiser"], dir.path()).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_captures() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["simulate", "--duration-s", "10", "--seed", "5", "--out", "a"], dir.path());
    ok(&["simulate", "--duration-s", "10", "--seed", "5", "--out", "b"], dir.path());
    ok(&["simulate", "--duration-s", "10", "--seed", "6", "--out", "c"], dir.path());
    let read = |d: &str| fs::read(dir.path().join(d).join("capture.rvsc")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
}

#[test]
fn radar_recovers_rate_and_variants_agree() {
    let dir = tempfile::tempdir().unwrap();
    let scene = write_scene(dir.path(), "scene.json", 0.0003);
    ok(&["simulate", "--scene", &scene, "--duration-s", "120", "--out", "sim"], dir.path());
    ok(&["process-radar", "sim/capture.rvsc", "--out", "a"], dir.path());
    ok(&["process-radar", "sim/capture.rvsc", "--variant", "B", "--out", "b"], dir.path());
    let (a, b) = (rates(&dir.path().join("a/rates.csv")), rates(&dir.path().join("b/rates.csv")));
    assert_eq!(a.len(), 1201);
    assert!(a.rates_bpm.iter().all(|r| (r - 15.0).abs() <= 1.0));
    assert!(a.rates_bpm.iter().zip(&b.rates_bpm).all(|(x, y)| (x - y.abs()).abs() <= 1.0));
    assert!(dir.path().join("a/phase.csv").exists());
    assert!(!dir.path().join("b/phase.csv").exists());
    let header = fs::read_to_string(dir.path().join("a/spectrogram.csv")).unwrap();
    assert!(header.starts_with("time_s,6,7,"));
}

#[test]
fn empty_scene_fails_cleanly_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.json"), r#"{"targets": [], "static_reflectors": [], "snr_db": null, "seed": 0}"#).unwrap();
    ok(&["simulate", "--scene", "empty.json", "--duration-s", "70", "--out", "sim"], dir.path());
    let out = resprad(&["process-radar", "sim/capture.rvsc", "--out", "r"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.starts_with("error: radar pipeline:"), "{msg}");
    assert!(!msg.contains("panicked"));
}

#[test]
fn audio_chain_and_comparisons() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["simulate-audio", "--rate-bpm", "15", "--duration-s", "120", "--out", "exhale"], d);
    ok(&["simulate-audio", "--rate-bpm", "15", "--both-sounds", "--noise-db", "-20", "--duration-s", "120", "--out", "both"], d);
    ok(&["process-audio", "exhale/audio.wav", "--out", "ae"], d);
    ok(&["process-audio", "both/audio.wav", "--out", "ab"], d);
    ok(&["process-audio", "exhale/audio.wav", "--out", "am", "--decimator", "multistage"], d);
    assert!(rates(&d.join("am/rates.csv")).rates_bpm.iter().all(|r| (r - 15.0).abs() <= 1.0));
    assert!(rates(&d.join("ae/rates.csv")).rates_bpm.iter().all(|r| (r - 15.0).abs() <= 1.0));
    assert!(rates(&d.join("ab/rates.csv")).rates_bpm.iter().all(|r| (r - 30.0).abs() <= 1.0));

    let same: serde_json::Value = serde_json::from_str(&ok(&["compare", "ae/rates.csv", "ae/rates.csv"], d)).unwrap();
    assert_eq!(same["mae_bpm"], 0.0);

    ok(&["simulate", "--duration-s", "120", "--out", "sim"], d);
    ok(&["process-radar", "sim/capture.rvsc", "--out", "radar"], d);
    let line = ok(&["compare", "radar/rates.csv", "ab/rates.csv"], d);
    assert_eq!(line.lines().count(), 1);
    let doubled: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert!(doubled["within_2bpm_fraction"].as_f64().unwrap() < 0.01);
    assert_eq!(doubled["n_instants"], 1201);
}

#[test]
fn rerun_reproduces_outputs_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let scene = write_scene(d, "scene.json", 0.001);
    ok(&["simulate", "--scene", &scene, "--duration-s", "90", "--out", "sim"], d);
    ok(&["process-radar", "sim/capture.rvsc", "--out", "radar", "--clutter", "arc", "--band-low", "8"], d);
    ok(&["simulate-audio", "--noise-db", "-10", "--seed", "4", "--duration-s", "90", "--out", "aud"], d);
    ok(&["process-audio", "aud/audio.wav", "--out", "audp", "--rectifier", "square"], d);
    ok(&["compare", "radar/rates.csv", "audp/rates.csv", "--out", "cmp"], d);

    for run in ["sim", "radar", "aud", "audp", "cmp"] {
        let before: Vec<_> = files(&d.join(run));
        // Same directory: every byte, manifest included, comes out the same.
        ok(&["rerun", &format!("{run}/manifest.json")], d);
        assert_eq!(files(&d.join(run)), before, "{run}");
        // Elsewhere: everything but the manifest's out_dir matches.
        let other = format!("{run}-again");
        ok(&["rerun", &format!("{run}/manifest.json"), "--out", &other], d);
        let again = files(&d.join(&other));
        assert_eq!(again.len(), before.len());
        for ((na, a), (nb, b)) in before.iter().zip(&again) {
            assert_eq!(na, nb);
            if na != "manifest.json" {
                assert!(a == b, "{run}/{na} differs");
            }
        }
    }
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn tampered_or_dangling_manifest_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["simulate", "--duration-s", "65", "--out", "sim"], d);
    ok(&["process-radar", "sim/capture.rvsc", "--out", "radar"], d);
    let path = d.join("radar/manifest.json");
    let text = fs::read_to_string(&path).unwrap();
    fs::write(d.join("edited.json"), text.replacen("\"variant\": \"A\"", "\"variant\": \"B\"", 1)).unwrap();
    assert_eq!(resprad(&["rerun", "edited.json"], d).status.code(), Some(2));
    fs::remove_file(d.join("sim/capture.rvsc")).unwrap();
    assert_eq!(resprad(&["rerun", "radar/manifest.json"], d).status.code(), Some(2));
}

#[test]
fn listen_receives_replayed_capture() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&["simulate", "--duration-s", "5", "--out", "sim"], d);
    let port = {
        let probe = std::net::UdpSocket::bind("127.0.0.1:0").unwrap();
        probe.local_addr().unwrap().port()
    };
    let listener = Command::new(env!("CARGO_BIN_EXE_resprad"))
        .args(["listen", "--bind", "127.0.0.1", "--port", &port.to_string(), "--idle-ms", "1500", "--out", "got.rvsc"])
        .current_dir(d)
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(300));
    ok(&["replay", "sim/capture.rvsc", "--target", &format!("127.0.0.1:{port}")], d);
    let out = listener.wait_with_output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["frames"], 100);
    assert_eq!(report["loss"]["gaps"].as_array().unwrap().len(), 0);
    assert_eq!(load_capture(d.join("got.rvsc")).unwrap().data(), load_capture(d.join("sim/capture.rvsc")).unwrap().data());
}
