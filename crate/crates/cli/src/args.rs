use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use resprad::audio::{Decimator, Rectifier};
use resprad::radar::{ClutterRemoval, Variant, DEFAULT_TARGET_WINDOW_M};
use resprad::spectral::{StftParams, WindowShape, DEFAULT_BAND_BPM};

#[derive(Debug, Parser)]
#[command(name = "resprad", version, about = "Respiration rate from FMCW radar captures and headset audio")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a radar capture and its ground truth from a scene description.
    Simulate(SimulateArgs),
    /// Synthesize a breathing-sound recording as 16-bit 44.1 kHz WAV.
    SimulateAudio(SimulateAudioArgs),
    /// Run the radar chain on a capture file.
    ProcessRadar(ProcessRadarArgs),
    /// Run the audio chain on a WAV recording.
    ProcessAudio(ProcessAudioArgs),
    /// Compare two rate CSVs and print a one-line JSON summary.
    Compare(CompareArgs),
    /// Receive capture-card datagrams over UDP and write a capture file.
    Listen(ListenArgs),
    /// Send a capture file as capture-card datagrams.
    Replay(ReplayArgs),
    /// Repeat a run from its manifest.json.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scene JSON; the built-in single-subject scene when omitted.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Radar configuration JSON; the default 77 GHz profile when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 360.0)]
    pub duration_s: f64,
    /// Overrides the scene's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateAudioArgs {
    #[arg(long, default_value_t = 15.0)]
    pub rate_bpm: f64,
    /// Make inhalations audible as well as exhalations.
    #[arg(long)]
    pub both_sounds: bool,
    #[arg(long, default_value_t = 1.0)]
    pub burst_s: f64,
    /// Background noise relative to mean breath power; omit for none.
    #[arg(long, allow_hyphen_values = true)]
    pub noise_db: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    pub burst_amplitude: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 360.0)]
    pub duration_s: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SpectralArgs {
    #[arg(long, default_value_t = StftParams::default().window_s)]
    pub window_s: f64,
    #[arg(long, default_value_t = StftParams::default().overlap_s)]
    pub overlap_s: f64,
    #[arg(long, default_value_t = WindowShape::default())]
    pub window_shape: WindowShape,
    #[arg(long, default_value_t = DEFAULT_BAND_BPM.0)]
    pub band_low: f64,
    #[arg(long, default_value_t = DEFAULT_BAND_BPM.1)]
    pub band_high: f64,
}

impl SpectralArgs {
    pub fn stft(&self) -> StftParams {
        StftParams {
            window_s: self.window_s,
            overlap_s: self.overlap_s,
            window_shape: self.window_shape,
            ..StftParams::default()
        }
    }

    pub fn band(&self) -> (f64, f64) {
        (self.band_low, self.band_high)
    }
}

#[derive(Debug, Args)]
pub struct ProcessRadarArgs {
    pub capture: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = Variant::default())]
    pub variant: Variant,
    #[arg(long, default_value_t = DEFAULT_TARGET_WINDOW_M.0)]
    pub min_range_m: f64,
    #[arg(long, default_value_t = DEFAULT_TARGET_WINDOW_M.1)]
    pub max_range_m: f64,
    /// Static-component removal: mean, arc or none.
    #[arg(long, default_value_t = ClutterRemoval::default())]
    pub clutter: ClutterRemoval,
    /// Keep the unwrapped phase as is instead of removing a linear trend.
    #[arg(long)]
    pub no_detrend: bool,
    /// Also write the full range-time map (large).
    #[arg(long)]
    pub write_map: bool,
    #[command(flatten)]
    pub spectral: SpectralArgs,
}

#[derive(Debug, Args)]
pub struct ProcessAudioArgs {
    pub wav: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// single (order-20 FIR) or multistage.
    #[arg(long, default_value_t = Decimator::default())]
    pub decimator: Decimator,
    /// abs or square.
    #[arg(long, default_value_t = Rectifier::default())]
    pub rectifier: Rectifier,
    #[command(flatten)]
    pub spectral: SpectralArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub rates_a: PathBuf,
    pub rates_b: PathBuf,
    /// Also write comparison.json and a manifest here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ListenArgs {
    #[arg(long, default_value_t = resprad::ingest::DEFAULT_PORT)]
    pub port: u16,
    #[arg(long, default_value = "0.0.0.0")]
    pub bind: String,
    /// Radar configuration JSON; the default profile when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Stop after this many datagrams.
    #[arg(long, default_value_t = usize::MAX)]
    pub max_datagrams: usize,
    /// Stop after this long without traffic.
    #[arg(long, default_value_t = 2000)]
    pub idle_ms: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub capture: PathBuf,
    #[arg(long)]
    pub target: SocketAddr,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the manifest's output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
