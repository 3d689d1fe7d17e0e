mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modvit::ErrorKind;

pub const DEFAULT_SEED: u64 = 42;

/// Community-aware influence toolkit: signed vitality centralities over
/// crisp or overlapping communities, evaluated with a deterministic SIR
/// spreading harness.
#[derive(Parser, Debug)]
#[command(name = "modvit", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Topology statistics, plus community quality when a cover or partition is given.
    Stats(StatsArgs),
    /// Detect overlapping communities with speaker-listener label propagation.
    Detect(DetectArgs),
    /// Score nodes with a centrality measure and write a score file.
    Score(ScoreArgs),
    /// Outbreak sweep: compare ranked seed sets against the degree baseline.
    Sweep(SweepArgs),
}

#[derive(clap::Args, Debug)]
pub(crate) struct GraphArgs {
    /// Edge-list file: one edge per line, two whitespace- or comma-separated
    /// labels, '#'/'%' comment lines ignored.
    #[arg(long, value_name = "PATH")]
    pub(crate) edges: PathBuf,
    /// Reduce the graph to its largest connected component before anything else.
    #[arg(long)]
    pub(crate) lcc: bool,
}

#[derive(clap::Args, Debug)]
pub(crate) struct StatsArgs {
    #[command(flatten)]
    pub(crate) graph: GraphArgs,
    /// Overlapping cover file.
    #[arg(long, value_name = "PATH")]
    pub(crate) cover: Option<PathBuf>,
    /// Crisp partition file.
    #[arg(long, value_name = "PATH")]
    pub(crate) partition: Option<PathBuf>,
    /// Directory for the machine-readable stats.json.
    #[arg(long, value_name = "DIR")]
    pub(crate) out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
pub(crate) struct DetectArgs {
    #[command(flatten)]
    pub(crate) graph: GraphArgs,
    /// Label-propagation iterations.
    #[arg(long = "slpa-T", value_name = "N", default_value_t = 100)]
    pub(crate) slpa_t: usize,
    /// Membership-retention threshold.
    #[arg(long = "slpa-r", value_name = "F", default_value_t = 0.01)]
    pub(crate) slpa_r: f64,
    /// Master seed for all randomness.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SEED)]
    pub(crate) seed: u64,
    /// Output directory for cover.tsv.
    #[arg(long, value_name = "DIR")]
    pub(crate) out: PathBuf,
}

#[derive(clap::Args, Debug)]
pub(crate) struct ScoreArgs {
    #[command(flatten)]
    pub(crate) graph: GraphArgs,
    /// Overlapping cover file (needed by omv; mv collapses it if no partition given).
    #[arg(long, value_name = "PATH")]
    pub(crate) cover: Option<PathBuf>,
    /// Crisp partition file (needed by mv; omv widens it if no cover given).
    #[arg(long, value_name = "PATH")]
    pub(crate) partition: Option<PathBuf>,
    /// Centrality measure to compute.
    #[arg(long, value_name = "MEASURE")]
    pub(crate) measure: Measure,
    /// Re-verify a 1% node sample against the full-recompute reference path.
    #[arg(long)]
    pub(crate) verify_oracle: bool,
    /// Master seed (drives the verification sample).
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SEED)]
    pub(crate) seed: u64,
    /// Output directory for scores_<measure>.tsv.
    #[arg(long, value_name = "DIR")]
    pub(crate) out: PathBuf,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Measure {
    /// Modularity vitality over a crisp partition.
    Mv,
    /// Overlapping modularity vitality over a cover.
    Omv,
    /// Degree centrality (the evaluation baseline).
    Degree,
}

impl Measure {
    fn tag(self) -> &'static str {
        match self {
            Measure::Mv => "mv",
            Measure::Omv => "omv",
            Measure::Degree => "degree",
        }
    }
}

#[derive(clap::Args, Debug)]
pub(crate) struct SweepArgs {
    #[command(flatten)]
    pub(crate) graph: GraphArgs,
    /// Score file produced by `modvit score`; repeat for several measures.
    #[arg(long = "scores", value_name = "PATH", required = true)]
    pub(crate) scores: Vec<PathBuf>,
    /// Ranking strategy applied to every measure; repeat for several.
    /// Defaults to pos, neg and abs.
    #[arg(long, value_name = "STRATEGY")]
    pub(crate) strategy: Vec<String>,
    /// Per-contact infection probability; defaults to min(1, 1.5 * lambda_c).
    #[arg(long, value_name = "F")]
    pub(crate) lambda: Option<f64>,
    /// Per-step recovery probability.
    #[arg(long, value_name = "F", default_value_t = 1.0)]
    pub(crate) gamma: f64,
    /// Simulations averaged per grid point.
    #[arg(long, value_name = "N", default_value_t = 100)]
    pub(crate) runs: usize,
    /// Seed-fraction grid as START:STOP:STEP.
    #[arg(long, value_name = "START:STOP:STEP", default_value = "0.01:0.30:0.01")]
    pub(crate) fgrid: String,
    /// Master seed for all randomness.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_SEED)]
    pub(crate) seed: u64,
    /// Output directory for sweep.csv, sweep.json, rankings and manifest.json.
    #[arg(long, value_name = "DIR")]
    pub(crate) out: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are not errors
            use clap::error::ErrorKind as ClapKind;
            let code = match err.kind() {
                ClapKind::DisplayHelp | ClapKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Stats(args) => commands::stats(args),
        Command::Detect(args) => commands::detect(args),
        Command::Score(args) => commands::score(args),
        Command::Sweep(args) => commands::sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numeric => 3,
            })
        }
    }
}
