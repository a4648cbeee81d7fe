use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Star products on polynomial Poisson structures: graphs, weights,
/// products and identity checks.
#[derive(Debug, Parser)]
#[command(name = "defq", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the labeled graphs with `n` aerial and `nbar` boundary vertices.
    Graphs {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        nbar: usize,
    },
    /// Estimate the weight of one graph and try to snap it to a fraction.
    Weight {
        /// Graph id, e.g. `1;2;[b1,b2]`.
        id: String,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Coefficients of the graph-expanded star product `f ⋆ g`.
    Star {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Coefficients of the Moyal product for a constant structure.
    Moyal {
        #[command(flatten)]
        pi: PiArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
    /// Run one of the identity checks; exits 1 if it fails.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        opts: CheckArgs,
    },
    /// Same as `check assoc`.
    Assoc {
        #[command(flatten)]
        opts: CheckArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Jacobi,
    Assoc,
    Hochschild,
    Wick,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsMode {
    /// Snapped weights from the shipped table and the cache.
    Table,
    /// Fresh Monte Carlo estimates.
    Mc,
}

#[derive(Debug, Args)]
pub struct PiArg {
    /// Poisson structure: a JSON file, inline JSON, or `so3` / `canonical`.
    #[arg(long)]
    pub pi: String,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "max-denominator", default_value_t = 24)]
    pub max_denominator: u64,
}

#[derive(Debug, Args)]
pub struct CacheArgs {
    /// Weight cache file; new estimates are recorded here.
    #[arg(long, env = "DEFQ_WEIGHT_CACHE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    #[arg(long, value_enum, default_value_t = WeightsMode::Table)]
    pub weights: WeightsMode,
    #[command(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    pub cache: CacheArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub pi: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
    #[command(flatten)]
    pub weights: WeightArgs,
}
