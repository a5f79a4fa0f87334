use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use grover_rel::ScalarBackend;

#[derive(Parser, Debug)]
#[command(name = "grover-rel", version)]
#[command(about = "Relativistic energy transfer between a heavy and a light ball in front of a wall")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one transfer and report the first maximum
    Simulate(SimulateArgs),
    /// Run a grid of transfers and emit one record per (N, v0)
    Sweep(SweepArgs),
    /// Print the closed-form predictions for N and/or v0
    Predict(PredictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Standard,
    Extended,
}

impl From<Precision> for ScalarBackend {
    fn from(p: Precision) -> Self {
        match p {
            Precision::Standard => ScalarBackend::Standard,
            Precision::Extended => ScalarBackend::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("speed").required(true).args(["v0", "one_minus_v0"])))]
pub struct SimulateArgs {
    /// Number of unit-mass objects; the heavy ball has mass N - 1
    #[arg(long)]
    pub n: String,

    /// Initial speed of both balls, as a fraction of light speed
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,

    /// Initial speed given as 1 - v0, for speeds very close to light
    #[arg(long, allow_hyphen_values = true)]
    pub one_minus_v0: Option<String>,

    #[arg(long, value_enum, default_value_t = Precision::Standard)]
    pub precision: Precision,

    /// Maximum number of collisions
    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Write the per-collision trajectory as JSON to this file
    #[arg(long)]
    pub trajectory: Option<PathBuf>,

    /// Machine-readable output instead of the summary
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("speeds").required(true).args(["v0_list", "one_minus_v0_list"])))]
pub struct SweepArgs {
    /// Comma-separated N values, or `start:stop:count-log` for log spacing
    #[arg(long)]
    pub n_list: String,

    /// Comma-separated initial speeds
    #[arg(long)]
    pub v0_list: Option<String>,

    /// Comma-separated values of 1 - v0
    #[arg(long)]
    pub one_minus_v0_list: Option<String>,

    /// Include the classical step count for each N
    #[arg(long)]
    pub classical: bool,

    #[arg(long, value_enum, default_value_t = Precision::Standard)]
    pub precision: Precision,

    #[arg(long)]
    pub max_iter: Option<usize>,

    /// Output file (standard output when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads (default: all available cores)
    #[arg(long, env = "GROVER_REL_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PredictArgs {
    #[arg(long)]
    pub n: Option<String>,

    #[arg(long)]
    pub v0: Option<String>,

    #[arg(long, value_enum, default_value_t = Precision::Standard)]
    pub precision: Precision,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
}
