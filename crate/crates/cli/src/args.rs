use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qanneal_core::Mode;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "qanneal",
    version,
    about = "Simulate post-selected phase-estimation annealing circuits"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Master seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (defaults to the number of cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Circuit evaluation mode.
    #[arg(long, global = true, default_value = "closed", value_parser = parse_mode)]
    pub mode: Mode,

    /// Leave the wall-clock timestamp out of outputs.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: qanneal_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random problem instance as JSON.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Check the gate-level simulation against its closed form.
    Verify(VerifyArgs),
    /// Draw post-selected samples and compare them with the exact law.
    Sample(SampleArgs),
    /// Tabulate the thermodynamic quantities over a list of b values.
    Sweep(SweepArgs),
    /// Compare quantum repetitions with simulated-annealing evaluations.
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Random graph for balanced bipartitioning.
    Graph(GraphArgs),
    /// Random k-local cost function.
    Cost(CostArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArgs {
    /// Number of vertices.
    #[arg(long)]
    pub v: usize,
    /// Edge probability.
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Balance penalty weight.
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Edge weight.
    #[arg(long, default_value_t = 1.0)]
    pub coupling: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CostArgs {
    /// Number of variables.
    #[arg(long)]
    pub n: usize,
    /// Maximum term arity.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Probability that each qubit subset carries a term.
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    /// Number of control qubits.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    /// Largest accepted residual for amplitude and probability checks.
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Perturb one phase-table entry before simulating (negative control).
    #[arg(long, hide = true)]
    pub corrupt_phase: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    /// Number of independent runs.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Give up on a run after this many rejected repetitions.
    #[arg(long, default_value_t = qanneal_core::circuit::DEFAULT_MAX_REPETITIONS)]
    pub max_repetitions: u64,
    /// Where to write the summary JSON (stderr when omitted).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    /// Comma-separated list of b values (any positive reals).
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0])]
    pub b_list: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Instance JSON file.
    pub instance: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    /// Simulated-annealing runs.
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Initial annealing temperature.
    #[arg(long, default_value_t = 2.0)]
    pub t_start: f64,
    /// Final annealing temperature.
    #[arg(long, default_value_t = 0.01)]
    pub t_end: f64,
    /// Metropolis steps per run.
    #[arg(long, default_value_t = 2000)]
    pub steps: u64,
    /// Include every annealing run in the report.
    #[arg(long)]
    pub runs: bool,
}
