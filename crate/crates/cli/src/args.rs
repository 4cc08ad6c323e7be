use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geogate_core::{DeviceLimits, NamedPath, DEFAULT_SAMPLES_PER_SEGMENT, DEFAULT_STEPS_PER_TAU0};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "geogate", version, about = "Pulse synthesis and simulation for geometric single-qubit gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the square-wave pulse for a path and write its samples.
    Synthesize(SynthesizeArgs),
    /// Integrate the master equation from |+⟩ and write the trajectory.
    Simulate(SimulateArgs),
    /// Search the conventional triangle family for the shortest gate.
    Optimize(OptimizeArgs),
    /// Compare the three named paths.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PathArgs {
    /// Named path: orange-slice, conventional-triangle or unconventional-triangle.
    #[arg(long, conflicts_with = "path_file")]
    pub path: Option<NamedPath>,
    /// JSON path file: {"eta": .., "segments": [{"kind", "theta_start", ..}]}.
    #[arg(long)]
    pub path_file: Option<PathBuf>,
    /// Overrides the path's η.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Azimuth of the first meridian of a named path, in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// Ω₀ and Δ₀ in MHz, γ₁ and γ₂ in Hz.
    Physical,
    /// Everything in multiples of Ω₀.
    Normalized,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, value_enum, default_value = "physical")]
    pub units: Units,
    /// Maximal Rabi frequency [MHz, physical units only; default 20].
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Maximal detuning [default 20 MHz, or 1 normalized; "inf" for unbounded].
    #[arg(long)]
    pub delta0: Option<f64>,
    /// γ₁ [default 4e4 Hz, or 2e-3 normalized].
    #[arg(long)]
    pub gamma1: Option<f64>,
    /// γ₂ [default 4e4 Hz, or 2e-3 normalized].
    #[arg(long)]
    pub gamma2: Option<f64>,
}

const OMEGA0_MHZ: f64 = 20.0;
const GAMMA_HZ: f64 = 4e4;
const GAMMA_NORMALIZED: f64 = 2e-3;

impl LimitArgs {
    /// Converts the flags to Ω₀-normalized limits.
    pub fn limits(&self) -> CliResult<DeviceLimits> {
        let limits = match self.units {
            Units::Physical => {
                let omega0 = self.omega0.unwrap_or(OMEGA0_MHZ) * 1e6;
                let delta0 = self.delta0.unwrap_or(OMEGA0_MHZ) * 1e6;
                DeviceLimits::from_physical(
                    omega0,
                    delta0,
                    self.gamma1.unwrap_or(GAMMA_HZ),
                    self.gamma2.unwrap_or(GAMMA_HZ),
                )
            }
            Units::Normalized => {
                if self.omega0.is_some() {
                    return Err(CliError::Config("--omega0 is the unit in normalized mode and cannot be set".into()));
                }
                DeviceLimits::new(
                    1.0,
                    self.delta0.unwrap_or(1.0),
                    self.gamma1.unwrap_or(GAMMA_NORMALIZED),
                    self.gamma2.unwrap_or(GAMMA_NORMALIZED),
                )
            }
        };
        Ok(limits?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct StepArgs {
    /// Integration steps per τ₀.
    #[arg(long, default_value_t = DEFAULT_STEPS_PER_TAU0 as u64, value_parser = clap::value_parser!(u64).range(100..))]
    pub dt_per_tau0: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_SEGMENT, value_parser = positive)]
    pub samples_per_segment: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub path: PathArgs,
    /// JSON pulse file written by `synthesize --format json`.
    #[arg(long, conflicts_with_all = ["path", "path_file", "eta"])]
    pub pulse: Option<PathBuf>,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub steps: StepArgs,
    /// Keep every n-th integration step in the trajectory.
    #[arg(long, default_value_t = 1, value_parser = positive)]
    pub record_every: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub limits: LimitArgs,
    /// Target geometric phase in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub gamma_target: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(flatten)]
    pub steps: StepArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    /// Writes the table as CSV or JSON instead of aligned text.
    #[command(flatten)]
    pub output: OutputArgs,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        Ok(_) => Err("must be at least 1".into()),
        Err(e) => Err(e.to_string()),
    }
}
