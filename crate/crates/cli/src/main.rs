mod commands;
mod error;
mod io;
mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

/// Geodesic-curve feature augmentation in pre-shape space.
///
/// All randomness comes from `--seed` (default 0). Relative output paths are
/// resolved against `$FAGC_OUTPUT_DIR` when it is set.
#[derive(Debug, Parser)]
#[command(name = "fagc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project a feature CSV onto the pre-shape sphere.
    Project(ProjectArgs),
    /// Fit one geodesic curve per label.
    Fit(FitArgs),
    /// Sample augmented pre-shapes along fitted curves.
    Augment(AugmentArgs),
    /// Compare classifier accuracy with and without augmentation.
    Eval(EvalArgs),
    /// Generate synthetic train/test feature CSVs.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct ManifestArg {
    /// Manifest path [default: <output>.manifest.json]
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProjectArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[command(flatten)]
    manifest: ManifestArg,
}

#[derive(Debug, Args)]
struct FitFlags {
    /// Candidate end points per iteration (S).
    #[arg(long = "candidates", default_value_t = 100)]
    candidates: usize,
    /// Endpoint-motion convergence threshold in radians.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    /// Run the bare iterative loop without the member-pair seed.
    #[arg(long)]
    no_pair_seed: bool,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Pre-shape CSV with at least 3 rows per label.
    #[arg(long, short)]
    input: PathBuf,
    /// Curve file to write.
    #[arg(long, short)]
    output: PathBuf,
    #[command(flatten)]
    fit: FitFlags,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    manifest: ManifestArg,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long)]
    curves: PathBuf,
    /// Augmented vectors per label.
    #[arg(long = "k", default_value_t = 100)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short)]
    output: PathBuf,
    /// Re-check that every written row lies on its curve.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    manifest: ManifestArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassifierArg {
    Knn,
    Softmax,
    Both,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Real training pre-shapes.
    #[arg(long)]
    real: PathBuf,
    /// Test pre-shapes.
    #[arg(long)]
    test: PathBuf,
    /// Fixed augmented pre-shapes.
    #[arg(long, conflicts_with = "curves")]
    augmented: Option<PathBuf>,
    /// Curve file; augmented sets are resampled per seed.
    #[arg(long)]
    curves: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ClassifierArg::Both)]
    classifier: ClassifierArg,
    /// Neighbors for the KNN classifier.
    #[arg(long, default_value_t = 1)]
    knn_k: usize,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    /// Sweep lambda over 0, 0.1, 0.3, 0.45, 0.5, 0.55, 0.7, 0.9, 1.
    #[arg(long)]
    lambda_sweep: bool,
    /// Augmented vectors per label when resampling from --curves.
    #[arg(long = "k", default_value_t = 100)]
    k: usize,
    /// Sweep K over 10, 100, 400, 1000, 2000 (needs --curves).
    #[arg(long, requires = "curves")]
    k_sweep: bool,
    /// Number of seeds per configuration.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// First seed; runs use seed, seed + 1, ...
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.05)]
    learning_rate: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    /// Real examples per step [default: full batch]
    #[arg(long)]
    batch_size: Option<usize>,
    /// Augmented examples per gated step [default: real batch size]
    #[arg(long)]
    augmented_batch_size: Option<usize>,
    /// Per-seed results CSV.
    #[arg(long, short)]
    output: PathBuf,
    /// Per-configuration summary CSV [default: <output stem>.summary.csv]
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    manifest: ManifestArg,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Number of categories (N).
    #[arg(long, default_value_t = 5)]
    categories: usize,
    /// Training samples per category (M).
    #[arg(long, default_value_t = 4)]
    samples: usize,
    /// Raw feature dimension (n).
    #[arg(long, default_value_t = 16)]
    dim: usize,
    /// Within-category dispersion in radians.
    #[arg(long, default_value_t = 0.15)]
    kappa: f64,
    #[arg(long, default_value_t = 200)]
    test_per_category: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    test: PathBuf,
    #[command(flatten)]
    manifest: ManifestArg,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Project(a) => commands::project(a),
        Command::Fit(a) => commands::fit(a),
        Command::Augment(a) => commands::augment(a),
        Command::Eval(a) => commands::eval(a),
        Command::Synth(a) => commands::synth(a),
    };
    if let Err(e) = result {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
