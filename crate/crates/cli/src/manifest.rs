use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use resprad::audio::AudioPipeline;
use resprad::radar::{RadarPipeline, Variant};
use resprad::sim::{BreathAudioSpec, SceneSpec};
use resprad::spectral::StftParams;
use resprad::RadarConfig;
use serde::{Deserialize, Serialize};

pub const MANIFEST_FILE: &str = "manifest.json";

/// What a run did, in enough detail to do it again.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    Simulate { scene: SceneSpec, config: RadarConfig, duration_s: f64 },
    SimulateAudio { spec: BreathAudioSpec, duration_s: f64 },
    ProcessRadar { pipeline: RadarPipeline, write_map: bool },
    ProcessAudio { pipeline: AudioPipeline },
    Compare,
}

/// Written as `manifest.json` beside every run's outputs.
///
/// The top-level fields summarise the job for people reading the file; `job`
/// is authoritative and the two are checked for agreement on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub inputs: Vec<PathBuf>,
    pub radar_config: Option<RadarConfig>,
    pub stft: Option<StftParams>,
    pub band_bpm: Option<(f64, f64)>,
    pub variant: Option<Variant>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub job: Job,
}

impl RunManifest {
    /// `radar_config` is the capture's configuration for radar processing.
    pub fn new(job: Job, inputs: Vec<PathBuf>, radar_config: Option<RadarConfig>, out_dir: &Path) -> Self {
        let mut m = Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            radar_config,
            stft: None,
            band_bpm: None,
            variant: None,
            seed: None,
            out_dir: out_dir.to_path_buf(),
            job,
        };
        m.fill_summary();
        m
    }

    fn fill_summary(&mut self) {
        match &self.job {
            Job::Simulate { scene, config, .. } => {
                self.radar_config = Some(*config);
                self.seed = Some(scene.seed);
            }
            Job::SimulateAudio { spec, .. } => self.seed = Some(spec.seed),
            Job::ProcessRadar { pipeline, .. } => {
                self.stft = Some(pipeline.stft);
                self.band_bpm = Some(pipeline.band_bpm);
                self.variant = Some(pipeline.variant);
            }
            Job::ProcessAudio { pipeline } => {
                self.stft = Some(pipeline.stft);
                self.band_bpm = Some(pipeline.band_bpm);
            }
            Job::Compare => {}
        }
    }

    pub fn write(&self, dir: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        fs::write(dir.join(MANIFEST_FILE), text).with_context(|| format!("writing manifest in {}", dir.display()))
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let mut expected = self.clone();
        expected.fill_summary();
        if expected != *self {
            bail!("manifest summary fields disagree with its job; edit the job section instead");
        }
        for input in &self.inputs {
            if !input.exists() {
                bail!("manifest input {} does not exist", input.display());
            }
        }
        Ok(())
    }
}
