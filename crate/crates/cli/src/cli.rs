use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use subdfo::dfo::IterationKind;
use subdfo::Variant;

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "subdfo", version, about = "Expected decrease of random-subspace direct search and model-based methods")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true)]
    pub variant: Option<Variant>,
    /// Ambient dimension(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub d: Vec<usize>,
    /// Subspace dimension(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub p: Vec<usize>,
    /// Monte Carlo replicates [default: 10000].
    #[arg(long, global = true)]
    pub nsims: Option<usize>,
    /// Master seed [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; a `<out>.manifest.json` is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for output files when `--out` is not given.
    #[arg(long, global = true, env = "SUBDFO_OUT_DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Core count(s) for the parallel work model, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub cores_model: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact, per-evaluation, per-work and asymptotic decrease.
    Formula {
        #[arg(long)]
        asymptotic_only: bool,
    },
    /// Monte Carlo estimate of the expected decrease.
    Mc {
        /// Sample full Stiefel bases instead of the coordinate reduction.
        #[arg(long)]
        full_basis: bool,
    },
    /// Regenerate a named figure grid.
    Figure(FigureArgs),
    /// Run the random-subspace optimizer on a test function.
    Optimize(OptimizeArgs),
    /// Run every verification gate; exits nonzero if any fails.
    Verify,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// ds-vary-d, ds-vary-p, ds-perfev-vary-d, ds-perfev-vary-p, mb-vary-d,
    /// mb-vary-p, mb-perfev-vary-d, mb-perfev-vary-p or parallel-sweep.
    pub name: String,
    /// TOML experiment description; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Grid length per core count for parallel-sweep.
    #[arg(long)]
    pub p_multiples: Option<usize>,
    #[arg(long)]
    pub no_mc: bool,
    #[arg(long)]
    pub no_formula: bool,
    #[arg(long)]
    pub no_asymptotic: bool,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// linear-random-g, sphere-quadratic or rosenbrock.
    #[arg(long)]
    pub function: String,
    /// TOML driver configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ds-complete, ds-opportunistic or mb.
    #[arg(long)]
    pub kind: Option<IterationKind>,
    /// Evaluation budget.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub initial_step: Option<f64>,
    #[arg(long)]
    pub expand: Option<f64>,
    #[arg(long)]
    pub contract: Option<f64>,
    #[arg(long)]
    pub min_step: Option<f64>,
}
