mod args;
mod commands;
mod config;
mod output;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<spectra_core::Error> for CliError {
    fn from(e: spectra_core::Error) -> Self {
        use spectra_core::Error as E;
        match e {
            E::Numerical(_) | E::InternalConsistency(_) => Self::Numerical(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) | Self::Io(_) => 3,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("SPECTRA_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("SPECTRA_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size the thread pool: {e}")))
}

fn execute(cfg: &RunConfig) -> Result<bool, CliError> {
    let start = Instant::now();
    let (report, ok) = match &cfg.command {
        Command::Spectrum(a) => (commands::spectrum(a)?, true),
        Command::Evolve(a) => (commands::evolve(a)?, true),
        Command::Leakage(a) => (commands::leakage_cmd(a)?, true),
        Command::Momentum(a) => (commands::momentum(a)?, true),
        Command::Bands(a) => (commands::bands(a)?, true),
        Command::Verify(a) => verify::run(a, cfg.seed),
    };
    let wall = cfg.timing.then(|| start.elapsed().as_secs_f64());
    let text = report.render(cfg, wall);
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| config::resolve(cli)).and_then(|cfg| execute(&cfg));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("spectra: one or more invariants failed");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spectra: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
