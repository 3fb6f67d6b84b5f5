use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "mogavs", version, about = "Pareto-optimal variable selection for linear regression")]
pub struct Cli {
    /// Worker threads for parallel model evaluation (default: all cores).
    #[arg(long, global = true, env = "MOGAVS_WORKERS")]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate one of the built-in synthetic benchmarks.
    Simulate(SimulateArgs),
    /// Search for the complexity/error frontier with the genetic algorithm.
    Run(RunArgs),
    /// Exhaustive best-subset search or a greedy selection trajectory.
    Baseline(BaselineArgs),
    /// Reports and charts for a saved frontier.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
pub struct DataArgs {
    /// Input CSV file.
    #[arg(long)]
    pub data: PathBuf,
    /// Response column name (a 1-based column index with --no-header).
    #[arg(long, default_value = "y")]
    pub target: String,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Benchmark: 1 (nonlinear terms, expanded to 25 columns) or 2
    /// (correlated predictors).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub example: u8,
    #[arg(long, short = 'n', default_value_t = 1000)]
    pub rows: usize,
    /// Number of predictors (example 2 only).
    #[arg(long, short = 'p', default_value_t = 100)]
    pub predictors: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noise standard deviation (defaults: 0.2 for example 1, 1 for example 2).
    #[arg(long)]
    pub noise: Option<f64>,
    /// Example 1: write the 5 raw inputs instead of the 25 expanded columns.
    #[arg(long)]
    pub raw: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Input CSV file.
    #[arg(long, required_unless_present = "replay")]
    pub data: Option<PathBuf>,
    /// Response column name (a 1-based column index with --no-header).
    #[arg(long, default_value = "y")]
    pub target: String,
    /// The file has no header row.
    #[arg(long)]
    pub no_header: bool,
    /// Re-run the configuration and data recorded in a frontier.json.
    #[arg(long, conflicts_with_all = ["data", "target", "no_header", "objective", "population", "iterations", "crossover", "mutation", "offspring", "seed", "bounds", "snapshot_every", "archive"])]
    pub replay: Option<PathBuf>,
    /// `insample` or `cv:K` for K-fold cross-validation.
    #[arg(long, default_value = "insample")]
    pub objective: String,
    /// Population size N (default: number of predictors).
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0.9)]
    pub crossover: f64,
    /// Per-bit mutation probability (default: 1/K).
    #[arg(long)]
    pub mutation: Option<f64>,
    /// Offspring per generation (default: N).
    #[arg(long)]
    pub offspring: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Limit model sizes to `lo:hi` selected predictors.
    #[arg(long)]
    pub bounds: Option<String>,
    /// Record population objectives every G generations.
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    /// Report the best of all models evaluated, not just the final population.
    #[arg(long)]
    pub archive: bool,
    /// Print the best error per model size after every generation (stderr).
    #[arg(long)]
    pub progress: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    Forward,
    Backward,
    Stepwise,
}

#[derive(Args, Debug)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub input: DataArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Largest model size for exhaustive search (default: all).
    #[arg(long)]
    pub max_complexity: Option<usize>,
    /// Permit exhaustive search beyond 25 predictors.
    #[arg(long)]
    pub allow_large: bool,
    /// Partial F needed to add a variable.
    #[arg(long, default_value_t = 4.0)]
    pub enter: f64,
    /// Partial F below which a variable is removed.
    #[arg(long, default_value_t = 4.0)]
    pub exit: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Knee,
    Criteria,
    Kappa,
    Osplot,
    Hsplot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// `2k/n + ln(mse)` and `k ln(n)/n + ln(mse)`.
    LogMse,
    /// `2k/n - 2 ln(mse)` and `k ln(n)/n - 2 ln(mse)`.
    NegTwoLogMse,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// A frontier.json written by `run` or `baseline --method exhaustive`.
    #[arg(long)]
    pub frontier: PathBuf,
    #[arg(long, value_enum)]
    pub task: Task,
    /// Count the intercept as a coefficient on complexity axes.
    #[arg(long)]
    pub count_intercept: bool,
    #[arg(long, value_enum, default_value = "log-mse")]
    pub form: Form,
    /// Model-size range `lo:hi` (kappa: required; hsplot: optional).
    #[arg(long)]
    pub range: Option<String>,
    /// Number of random train/evaluation splits for kappa.
    #[arg(long, default_value_t = 5)]
    pub splits: usize,
    #[arg(long, default_value_t = 0.5)]
    pub train_fraction: f64,
    /// Logarithmic error axis for osplot.
    #[arg(long)]
    pub log_y: bool,
    #[arg(long)]
    pub out: PathBuf,
}
