use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "frcfr", version, about = "Regression-based counterfactual regret minimization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a sweep of solver configurations and write one CSV per run.
    Solve(Box<SolveArgs>),
    /// Run the conformance suite and print one line per check.
    Validate(ValidateArgs),
    /// Write a game's enumerated tree as CSV.
    DumpTree(DumpTreeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkArg {
    Poly,
    Exp,
}

/// Every field is optional so a config file can fill the gaps; list-valued
/// flags take comma-separated values and span the sweep's cross-product.
#[derive(Debug, Clone, Default, Args)]
pub struct SolveArgs {
    /// Game names (see --list-games).
    #[arg(long, value_delimiter = ',')]
    pub game: Option<Vec<String>>,

    /// Link families.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub link: Option<Vec<LinkArg>>,

    /// Link parameters: exponent p for poly, temperature for exp.
    #[arg(long, value_delimiter = ',')]
    pub param: Option<Vec<f64>>,

    /// Features per action-label group; 0 means tabular.
    #[arg(long, value_delimiter = ',')]
    pub partitions: Option<Vec<usize>>,

    /// Shorthand for --partitions 0.
    #[arg(long)]
    pub tabular: bool,

    /// Buckets per partition [default: 10].
    #[arg(long)]
    pub buckets: Option<usize>,

    /// Ridge regularizer [default: 0.001].
    #[arg(long)]
    pub lambda: Option<f64>,

    /// Iterations per run [default: 5000].
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Seeds, as `a..b` (inclusive) or a comma-separated list [default: 1..5].
    #[arg(long)]
    pub seeds: Option<String>,

    /// `log` or a fixed interval [default: log].
    #[arg(long)]
    pub cadence: Option<String>,

    /// `sim` or `alt` [default: sim].
    #[arg(long)]
    pub update: Option<String>,

    /// Concurrent runs [default: available cores].
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Output directory [default: runs].
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Record elapsed milliseconds in the wall_ms column (otherwise 0).
    #[arg(long)]
    pub timing: bool,

    /// TOML file whose keys mirror the flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Print the registered game names and exit.
    #[arg(long)]
    pub list_games: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ValidateArgs {
    /// Skip the randomized batteries.
    #[arg(long)]
    pub quick: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DumpTreeArgs {
    #[arg(long)]
    pub game: String,

    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
