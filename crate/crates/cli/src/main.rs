use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Classical and metric-measure multidimensional scaling.
#[derive(Debug, Parser)]
#[command(name = "mmds", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical scaling of a dissimilarity matrix.
    Classic(ClassicArgs),
    /// Decide whether a dissimilarity matrix is Euclidean.
    EuclideanTest(EuclideanTestArgs),
    /// Convert a similarity matrix to dissimilarities.
    Sim2dis(Sim2disArgs),
    /// Scaling of a weighted (metric measure) space.
    MmMds(MmMdsArgs),
    /// Extend eigenfunctions to new points.
    Nystrom(NystromArgs),
    /// Embed the evenly sampled geodesic circle.
    Circle(CircleArgs),
    /// Spectrum convergence of the circle under refinement.
    ConvergeCircle(ConvergeCircleArgs),
    /// Spectrum and eigenfunction stability under a moving measure.
    ConvergeMeasure(ConvergeMeasureArgs),
    /// Scatter plot of two embedding axes as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct ReportArg {
    /// JSON report destination; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WeightArgs {
    /// Weight file, one value per line; uniform when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Rescale weights to sum to one instead of rejecting them.
    #[arg(long)]
    normalize_weights: bool,
}

#[derive(Debug, Args)]
struct ClassicArgs {
    /// Dissimilarity matrix.
    #[arg(long)]
    input: PathBuf,
    /// Target dimension.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    /// Embedding coordinates, one row per point.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct EuclideanTestArgs {
    #[arg(long)]
    input: PathBuf,
    /// Absolute eigenvalue tolerance; relative to the spectral radius by default.
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct Sim2disArgs {
    /// Similarity matrix.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct MmMdsArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct NystromArgs {
    /// Distances between the training points.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    weights: WeightArgs,
    /// Distances from each new point (rows) to every training point (columns).
    #[arg(long)]
    cross: PathBuf,
    /// Components to extend; every component with a positive eigenvalue by default.
    #[arg(long, value_delimiter = ',')]
    components: Option<Vec<usize>>,
    /// Eigenfunction values, one row per new point.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CircleMode {
    Analytic,
    Numeric,
    Compare,
}

#[derive(Debug, Args)]
struct CircleArgs {
    /// Number of sample points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    n: u64,
    /// Even target dimension.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, value_enum, default_value_t = CircleMode::Analytic)]
    mode: CircleMode,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct ConvergeCircleArgs {
    /// Strictly increasing resolutions.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
    ns: Vec<usize>,
    /// Reference resolution, larger than every entry of --ns.
    #[arg(long, default_value_t = 2048)]
    reference: usize,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct ConvergeMeasureArgs {
    #[arg(long)]
    input: PathBuf,
    /// Reference weights; uniform when omitted.
    #[arg(long)]
    reference_weights: Option<PathBuf>,
    /// Weight vectors, one per row.
    #[arg(long, required_unless_present = "steps", conflicts_with = "steps")]
    sequence: Option<PathBuf>,
    /// Interpolate from a random measure to the reference in this many steps.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: Option<u64>,
    /// Seed for the random starting measure.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    normalize_weights: bool,
    #[arg(long, default_value_t = 5)]
    top_k: usize,
    #[command(flatten)]
    report: ReportArg,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Embedding coordinates, one row per point.
    #[arg(long)]
    input: PathBuf,
    /// Pair of zero-based axes.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,1")]
    axes: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    report: ReportArg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
