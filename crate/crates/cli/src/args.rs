use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rotosensor::input::AngleGrid;
use rotosensor::SpinQuantum;

#[derive(Debug, Parser)]
#[command(name = "rotosensor", version, about = "Rotation-averaged fidelity of spin-j states and optimal rotosensors")]
pub struct Cli {
    /// key=value file supplying defaults for the subcommand's flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker thread cap
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anticoherence measures and purities of a state
    Measures(MeasuresArgs),
    /// Angular functions φ_t(η)
    Phi(PhiArgs),
    /// Average fidelity of a state
    Fidelity(FidelityArgs),
    /// Optimal state at one angle
    Optimize(OptimizeArgs),
    /// Optimal states over an angle grid, with transitions
    Sweep(SweepArgs),
    /// Critical angle between two profiles, or the first zero of φ_1
    Critical(CriticalArgs),
    /// Cross-route verification suite
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PhiRoute {
    Closed,
    Dicke,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FidelityRoute {
    Closed,
    Quadrature,
    Both,
}

fn spin(s: &str) -> Result<SpinQuantum, String> {
    s.parse().map_err(|e: rotosensor::Error| e.to_string())
}

fn angle(s: &str) -> Result<f64, String> {
    rotosensor::input::parse_angle(s).map_err(|e| e.to_string())
}

fn grid(s: &str) -> Result<AngleGrid, String> {
    s.parse().map_err(|e: rotosensor::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Spin quantum number, e.g. 3 or 7/2
    #[arg(long, value_parser = spin)]
    pub j: SpinQuantum,
    /// Catalog id, JSON file, or inline amplitudes in descending m ("1,0,0")
    #[arg(long)]
    pub state: String,
    /// Relative phase of the j = 9/2 small-angle catalog state
    #[arg(long)]
    pub chi: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AngleArgs {
    /// Rotation angle in radians; accepts pi, pi/2, pi*0.75
    #[arg(long, value_parser = angle, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Inclusive grid start:stop:count
    #[arg(long, value_parser = grid)]
    pub grid: Option<AngleGrid>,
}

#[derive(Debug, Args)]
pub struct MeasuresArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    #[arg(long, value_parser = spin)]
    pub j: SpinQuantum,
    /// Order t; all orders 0..=floor(j) when omitted
    #[arg(long)]
    pub t: Option<usize>,
    #[command(flatten)]
    pub angle: AngleArgs,
    #[arg(long, value_enum, default_value = "closed")]
    pub route: PhiRoute,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub angle: AngleArgs,
    #[arg(long, value_enum, default_value = "closed")]
    pub route: FidelityRoute,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 0.3)]
    pub simplex_scale: f64,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = spin)]
    pub j: SpinQuantum,
    #[arg(long, value_parser = angle)]
    pub eta: f64,
    /// Maximize instead of minimize
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub maximize: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = spin)]
    pub j: SpinQuantum,
    #[arg(long, value_parser = grid)]
    pub grid: AngleGrid,
    /// Also start each angle from the previous optimum
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub warm_start: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, value_parser = spin)]
    pub j: SpinQuantum,
    /// Measures A_1,…,A_floor(j) of the first state, e.g. "1,3/4"
    #[arg(long, requires_all = ["profile2", "bracket"])]
    pub profile1: Option<String>,
    #[arg(long, requires_all = ["profile1", "bracket"])]
    pub profile2: Option<String>,
    /// Bracket lo:hi in radians
    #[arg(long)]
    pub bracket: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated subset of oracle, dicke, identity, negativity
    #[arg(long, default_value = "oracle,dicke,identity,negativity")]
    pub checks: String,
    /// Largest j for every selected check; per-check defaults otherwise
    #[arg(long = "max-j", value_parser = spin)]
    pub max_j: Option<SpinQuantum>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
