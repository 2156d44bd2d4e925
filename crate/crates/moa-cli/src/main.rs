use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use moa::mining::PNorm;
use moa_cli::commands::{
    cmd_aggregate, cmd_analyze, cmd_compare, cmd_optimize, AggregateArgs, AnalyzeArgs,
    CompareArgs, OptimizeArgs,
};

/// Multi-objective study runner: optimize repeatedly, aggregate the fronts,
/// mine them, and compare studies.
#[derive(Parser)]
#[command(name = "moa", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_pnorm(s: &str) -> Result<PNorm, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured number of independent seeded optimizations and
    /// archive every final front.
    Optimize {
        /// Study configuration file (flat key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Maximum concurrent runs (default: one per CPU).
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Combine archived runs into best/worst attainment surfaces, the
    /// disparity report, and a convergence verdict.
    Aggregate {
        /// Study manifest written by `optimize`.
        #[arg(long)]
        manifest: PathBuf,
        /// Disparity cutoff: additionally emit the conservative front.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Convergence threshold on the relative hypervolume difference.
        #[arg(long)]
        threshold: Option<f64>,
        /// Output directory (default: next to the manifest).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mine an aggregated front: clustering, rule extraction, parameter
    /// autocorrelation, compromise and neighborhood selection, and
    /// kinematic feature transforms. With no analysis flags, runs
    /// everything that applies.
    Analyze {
        /// Study manifest written by `optimize`.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Analyze a front CSV instead of a manifest.
        #[arg(long)]
        front_csv: Option<PathBuf>,
        /// CSV column holding class labels (with --front-csv).
        #[arg(long)]
        label_column: Option<String>,
        /// Output directory (default: next to the input).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cluster count for k-means over front parameters.
        #[arg(long)]
        k: Option<usize>,
        /// Lag-1 autocorrelation of each parameter along the front.
        #[arg(long)]
        autocorrelation: bool,
        /// Norm for compromise selection: 1, 2, or inf.
        #[arg(long, value_parser = parse_pnorm)]
        p_norm: Option<PNorm>,
        /// Train a classification tree on the labeled front.
        #[arg(long)]
        cart: bool,
        /// Replication factor for the minority class before tree training.
        #[arg(long)]
        balance_factor: Option<u64>,
        /// Extract the neighborhood of the best value of this objective.
        #[arg(long)]
        neighborhood_objective: Option<usize>,
        /// Relative tolerance for the neighborhood window.
        #[arg(long)]
        neighborhood_tolerance: Option<f64>,
        /// Kinematic records CSV to transform into dimensionless features.
        #[arg(long)]
        kinematics: Option<PathBuf>,
        /// Override the evaluation seed used for labeling and clustering.
        #[arg(long)]
        eval_seed: Option<u64>,
    },
    /// Compare two studies' grand fronts by strict dominance coverage.
    Compare {
        /// Manifest of the first study.
        #[arg(long)]
        first: PathBuf,
        /// Manifest of the second study.
        #[arg(long)]
        second: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Optimize { config, jobs, out } => {
            cmd_optimize(&OptimizeArgs { config, jobs, out }).map(|_| ())
        }
        Command::Aggregate {
            manifest,
            epsilon,
            threshold,
            out,
        } => cmd_aggregate(&AggregateArgs {
            manifest,
            epsilon,
            threshold,
            out,
        })
        .map(|_| ()),
        Command::Analyze {
            manifest,
            front_csv,
            label_column,
            out,
            k,
            autocorrelation,
            p_norm,
            cart,
            balance_factor,
            neighborhood_objective,
            neighborhood_tolerance,
            kinematics,
            eval_seed,
        } => cmd_analyze(&AnalyzeArgs {
            manifest,
            front_csv,
            label_column,
            out,
            k,
            autocorrelation,
            p_norm,
            cart,
            balance_factor,
            neighborhood_objective,
            neighborhood_tolerance,
            kinematics,
            eval_seed,
        })
        .map(|_| ()),
        Command::Compare { first, second } => {
            cmd_compare(&CompareArgs { first, second }).map(|_| ())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
