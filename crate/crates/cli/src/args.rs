use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use primechaos::rmt_mc::{TABULATION_DIM, TABULATION_SAMPLES};

/// Spectral statistics of prime sequences, as plot-ready CSV.
#[derive(Debug, Parser)]
#[command(name = "primechaos", version)]
pub struct Cli {
    /// Configuration file of `key = value` lines (default: $PRIMECHAOS_CONFIG).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads (0 lets the pool decide).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Random seed for Monte Carlo work and checkpoint spot checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a prime subsequence.
    Primes(PrimesArgs),
    /// Unfold a prime sequence file.
    Unfold(UnfoldArgs),
    /// Spacing histogram or windowed statistic of an unfolded sequence.
    Stats(StatsArgs),
    /// Reference curves of an ensemble.
    Curves(CurvesArgs),
    /// Fit the Berry-Robnik mixing parameter to a number variance curve.
    Fit(FitArgs),
    /// Data and reference CSVs for one figure panel.
    Figure(FigureArgs),
    /// Fitted mixing parameters for a set of prime sequences, as JSON.
    Table(TableArgs),
    /// Monte Carlo skewness and excess table for GOE, GUE and GSE.
    McTabulate(McTabulateArgs),
    /// Verified prime-count checkpoints for long runs.
    Checkpoint(CheckpointArgs),
}

#[derive(Debug, Args)]
pub struct PrimesArgs {
    /// The first N primes.
    #[arg(long, value_name = "N", conflicts_with_all = ["after", "upto"])]
    pub first: Option<u64>,
    /// Start after the K-th prime.
    #[arg(long, value_name = "K", requires = "count", conflicts_with = "upto")]
    pub after: Option<u64>,
    /// Number of primes taken after the K-th.
    #[arg(long, value_name = "C", requires = "after")]
    pub count: Option<u64>,
    /// All primes up to X.
    #[arg(long, value_name = "X")]
    pub upto: Option<u64>,
    /// Keep every other prime of the selection, starting with the first.
    #[arg(long)]
    pub alternate: bool,
    /// Checkpoint file used to seed the count for --after.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UnfoldArgs {
    /// Prime sequence file (default: stdin).
    #[arg(short, long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// x-over-log-x, lilog or r.
    #[arg(long, default_value = "r")]
    pub method: String,
    /// Rescale to unit mean spacing starting at 0.
    #[arg(long)]
    pub rescale: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(id = "statistic", required = true, multiple = false)]
pub struct StatChoice {
    /// Nearest-neighbour spacing histogram.
    #[arg(long)]
    pub nnsd: bool,
    /// Number variance.
    #[arg(long)]
    pub numvar: bool,
    /// Skewness of window counts.
    #[arg(long)]
    pub skew: bool,
    /// Excess of window counts.
    #[arg(long)]
    pub excess: bool,
}

/// L grid flags shared by the curve commands.
#[derive(Debug, Args)]
pub struct GridArgs {
    /// First L of the grid.
    #[arg(long)]
    pub lmin: Option<f64>,
    /// Last L of the grid.
    #[arg(long)]
    pub lmax: Option<f64>,
    /// Spacing of the L grid.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Unfolded sequence file (default: stdin).
    #[arg(short, long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub which: StatChoice,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Offset between successive window starts.
    #[arg(long)]
    pub window_step: Option<f64>,
    #[arg(long)]
    pub bin_width: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    /// poisson, goe, gue, gse or br:<rho1>.
    #[arg(long)]
    pub kind: String,
    /// nnsd, sigma2, gamma1 or gamma2.
    #[arg(long, default_value = "sigma2")]
    pub statistic: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Number variance CSV (default: stdin).
    #[arg(short, long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Fit points with L above this value.
    #[arg(long)]
    pub lmin: Option<f64>,
    /// Fit points with L up to this value.
    #[arg(long)]
    pub lmax: Option<f64>,
    /// Weight residuals by the inverse squared standard error.
    #[arg(long)]
    pub weighted: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// 1a-1d, 2a-2d, 3a-3d, 4a-4d, 5a-5d or 6.
    pub id: String,
    /// Output directory.
    #[arg(short, long, value_name = "DIR", default_value = ".")]
    pub output: PathBuf,
    /// Permit panels that sieve far beyond desk scale.
    #[arg(long)]
    pub allow_long_run: bool,
    /// Checkpoint file for panels after the 10^12-th prime.
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Rows: left, right, desk, all, or a list such as n=1e2,k=1e7.
    #[arg(long, default_value = "desk")]
    pub rows: String,
    /// Permit rows beyond k = 1e8.
    #[arg(long)]
    pub allow_long_run: bool,
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct McTabulateArgs {
    /// Matrix dimension.
    #[arg(long, default_value_t = TABULATION_DIM)]
    pub dim: usize,
    /// Matrices per ensemble.
    #[arg(long, default_value_t = TABULATION_SAMPLES)]
    pub samples: usize,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckpointArgs {
    /// Count primes up to this bound.
    #[arg(long)]
    pub upto: u64,
    /// Stride between checkpoint pairs.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub every: u64,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}
