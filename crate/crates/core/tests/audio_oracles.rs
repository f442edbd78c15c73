use resprad::audio::{read_wav, write_wav, AudioPipeline, Decimator, Rectifier};
use resprad::sim::{synth_audio, BreathAudioSpec};

#[test]
fn exhale_only_recovers_breathing_rate() {
    for rate in [10.0, 15.0, 22.0] {
        let audio = synth_audio(&BreathAudioSpec::new(rate, true), 120.0).unwrap();
        let out = AudioPipeline::default().run(&audio).unwrap();
        assert_eq!(out.decimated.len(), 120 * 20);
        assert!(out.rates.fraction_within(rate, 1.0) == 1.0, "{rate} bpm: mean {}", out.rates.mean_bpm());
    }
}

#[test]
fn both_sounds_double_the_rate() {
    let audio = synth_audio(&BreathAudioSpec::new(15.0, false), 120.0).unwrap();
    let out = AudioPipeline::default().run(&audio).unwrap();
    assert!(out.rates.fraction_within(30.0, 1.0) == 1.0);
}

#[test]
fn alternative_decimator_and_rectifier_agree() {
    let audio = synth_audio(&BreathAudioSpec::new(15.0, true), 90.0).unwrap();
    for (decimator, rectifier) in [(Decimator::Multistage, Rectifier::Abs), (Decimator::Single, Rectifier::Square)] {
        let out = AudioPipeline { decimator, rectifier, ..AudioPipeline::default() }.run(&audio).unwrap();
        assert!(out.rates.fraction_within(15.0, 1.0) == 1.0, "{decimator} {rectifier}");
    }
}

#[test]
fn wav_round_trip_preserves_rate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("breath.wav");
    let audio = synth_audio(&BreathAudioSpec { noise_db: -20.0, seed: 4, ..BreathAudioSpec::new(18.0, true) }, 90.0).unwrap();
    write_wav(&audio, &path).unwrap();
    let back = read_wav(&path).unwrap();
    assert_eq!(back.len(), audio.len());
    let max_err = back.samples().iter().zip(audio.samples()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(max_err <= 1.0 / 32768.0);
    let out = AudioPipeline::default().run(&back).unwrap();
    assert!(out.rates.fraction_within(18.0, 1.0) == 1.0);
}
