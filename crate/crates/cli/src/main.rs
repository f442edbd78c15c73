mod args;
mod jobs;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Failure classes map to the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Missing or malformed input: exit 2.
    Input(anyhow::Error),
    /// Valid input the pipeline could not process: exit 3.
    Processing(anyhow::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Processing(_) => 3,
        }
    }
}

pub trait Classify<T> {
    fn input(self) -> Result<T, Failure>;
    fn processing(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Input(e.into()))
    }

    fn processing(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Processing(e.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => jobs::simulate(a),
        Command::SimulateAudio(a) => jobs::simulate_audio(a),
        Command::ProcessRadar(a) => jobs::process_radar(a),
        Command::ProcessAudio(a) => jobs::process_audio(a),
        Command::Compare(a) => jobs::compare(a),
        Command::Listen(a) => jobs::listen(a),
        Command::Replay(a) => jobs::replay(a),
        Command::Rerun(a) => jobs::rerun(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Input(e) | Failure::Processing(e)) = &f;
            eprintln!("error: {e:#}");
            ExitCode::from(f.exit_code())
        }
    }
}
