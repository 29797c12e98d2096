// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "segwise", version, about = "Cross-validated change-point counts with a lower confidence bound")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select K_CV, test down to K_min and report U = K_CV - K_min.
    Uq(UqArgs),
    /// Run a simulation scenario.
    Simulate(SimulateArgs),
    /// In-sample cost for r = 0..p_n, for elbow plots.
    CostPath(CostPathArgs),
    /// Fit a single segmentation.
    Detect(DetectArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Split,
    Vfold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Wbs,
    Pelt,
    Dp,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Settings shared by every command that reads a data file.
#[derive(Clone, Debug, Args)]
pub struct PipelineArgs {
    /// CSV input, one row per observation.
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Bootstrap replicates.
    #[arg(long = "B", visible_alias = "bootstrap", default_value_t = 500)]
    pub bootstrap: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Split)]
    pub mode: ModeArg,
    /// Fold count for `--mode vfold`.
    #[arg(long, default_value_t = 3)]
    pub folds: usize,
    #[arg(long, value_enum)]
    pub detector: Option<DetectorArg>,
    /// Upper bound on candidate counts (default: automatic).
    #[arg(long)]
    pub pn: Option<usize>,
    #[arg(long, env = "SEGWISE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "min-seg", default_value_t = 2)]
    pub min_seg: usize,
    #[arg(long = "wbs-intervals", default_value_t = 500)]
    pub wbs_intervals: usize,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format (default: csv for cost-path, json otherwise).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl PipelineArgs {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            alpha: 0.1,
            bootstrap: 500,
            mode: ModeArg::Split,
            folds: 3,
            detector: None,
            pn: None,
            seed: 0,
            min_seg: 2,
            wbs_intervals: 500,
            workers: None,
            out: None,
            format: None,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct UqArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Clone, Debug, Args)]
pub struct CostPathArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Clone, Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Number of change-points (default: PELT count at the BIC-like penalty).
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    /// TOML scenario file.
    pub scenario: PathBuf,
    /// Overrides the scenario's `master_seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Where to write the summary (JSON) or, with `--format csv`, the records.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-replication records as CSV to this path.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl SimulateArgs {
    pub fn new(scenario: impl Into<PathBuf>) -> Self {
        Self { scenario: scenario.into(), seed: None, workers: None, out: None, records: None, format: Format::Json }
    }
}
