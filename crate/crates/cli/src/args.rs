use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "spectra", version, about = "Spectra, evolution and band structure of quantum problems on [0, pi]")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON run configuration; its values override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Record wall time in the report metadata.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Closed-form and finite-difference eigenvalues.
    Spectrum(SpectrumArgs),
    /// Time series of a state under one self-adjoint extension.
    Evolve(EvolveArgs),
    /// Probability leaking out of a trap.
    Leakage(LeakageArgs),
    /// Momentum density of an infinite-well eigenstate.
    Momentum(MomentumArgs),
    /// Fiber band structure of a periodic cell potential.
    Bands(BandsArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Spectrum(_) => "spectrum",
            Self::Evolve(_) => "evolve",
            Self::Leakage(_) => "leakage",
            Self::Momentum(_) => "momentum",
            Self::Bands(_) => "bands",
            Self::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct SpectrumArgs {
    /// Infinite well on [0, pi].
    #[arg(long)]
    pub well: bool,
    /// Calogero problem x^2 + gamma/x^2 on the half-line.
    #[arg(long)]
    pub calogero: bool,
    /// Quasi-periodic family H_alpha.
    #[arg(long)]
    pub halpha: bool,
    /// Highest level of the well (levels 0..=nmax).
    #[arg(long, default_value_t = 5)]
    pub nmax: usize,
    /// Calogero coupling.
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Number of Calogero levels.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Quasi-periodic phase.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Label range `a..b` (inclusive) for H_alpha.
    #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
    pub n: String,
    /// Also solve the finite-difference problem.
    #[arg(long)]
    pub fd: bool,
    /// Grid points for the finite-difference problem.
    #[arg(long)]
    pub grid_n: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct EvolveArgs {
    /// Quasi-periodic phase; the infinite well when absent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Start in this infinite-well eigenstate instead of a packet.
    #[arg(long)]
    pub well_state: Option<usize>,
    /// Packet centre.
    #[arg(long, default_value_t = 1.2)]
    pub center: f64,
    /// Packet width.
    #[arg(long, default_value_t = 0.4)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tmax: f64,
    /// Number of output times after t = 0.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 256)]
    pub grid_n: usize,
    /// Use Crank-Nicolson with this time step instead of the spectral sum.
    #[arg(long)]
    pub cn_dt: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct LeakageArgs {
    /// Chain of traps of H_q = -d^2/dx^2 - q^2.
    #[arg(long)]
    pub multitrap: bool,
    /// Mirrored Calogero barrier on [-L, L].
    #[arg(long)]
    pub calogero: bool,
    /// Free particle on [-L, L] (no barrier).
    #[arg(long)]
    pub free: bool,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Trap holding the initial state.
    #[arg(long, default_value_t = 0)]
    pub cell: i64,
    /// Neighbouring traps kept on each side.
    #[arg(long, default_value_t = 1)]
    pub neighbours: i64,
    /// Grid points per trap.
    #[arg(long, default_value_t = 255)]
    pub m: usize,
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Half-width of the line for the Calogero and free runs.
    #[arg(long, default_value_t = 12.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 2400)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tmax: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct MomentumArgs {
    /// Infinite-well eigenstate.
    #[arg(long, default_value_t = 0)]
    pub well_state: usize,
    #[arg(long, default_value_t = 40.0)]
    pub pmax: f64,
    #[arg(long, default_value_t = 0.01)]
    pub dp: f64,
    #[arg(long, default_value_t = 1999)]
    pub grid_n: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct BandsArgs {
    /// Cell potential: `zero` or `bump`.
    #[arg(long, default_value = "zero")]
    pub potential: String,
    #[arg(long, default_value_t = 10.0)]
    pub height: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub center: f64,
    #[arg(long, default_value_t = 0.8)]
    pub half_width: f64,
    /// Bands per fiber.
    #[arg(long, default_value_t = 6)]
    pub k: usize,
    /// Number of alphas sampled in [0, 2 pi].
    #[arg(long, default_value_t = 33)]
    pub alphas: usize,
    #[arg(long, default_value_t = 400)]
    pub grid_n: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Run every invariant (the default when --only is absent).
    #[arg(long)]
    pub all: bool,
    /// Run only the invariants whose name contains this string.
    #[arg(long)]
    pub only: Option<String>,
}
