//! Command-line frontend for the tracking pipeline: synthesize datasets,
//! train cost models, link detections into identity tracks, label actions,
//! and score the results.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data or I/O errors.
//! Diagnostics go to stderr; evaluation reports go to stdout.

mod commands;
mod formats;
mod model_io;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "cuetrack",
    version,
    about = "Multi-cue multi-object tracking: dataset synthesis, cost-model training, \
             min-cost-flow and online tracking, action recognition and evaluation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset from a scenario configuration
    Synth(SynthArgs),
    /// Fit the observation and transition cost models from labeled data
    Train(TrainArgs),
    /// Link detections into trajectories and label their actions
    Track(TrackArgs),
    /// Relabel existing tracks with a different recognition window
    Recognize(RecognizeArgs),
    /// Score tracks against ground truth with CLEAR-MOT metrics
    EvalMot(EvalMotArgs),
    /// Score per-class action detection average precision
    EvalMap(EvalMapArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Offline,
    Online,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    Table,
    Json,
}

#[derive(clap::Args)]
pub struct SynthArgs {
    /// Scenario configuration (JSON; `{}` selects all defaults)
    #[arg(long)]
    pub config: PathBuf,
    /// Override the seed from the configuration file
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving detections.jsonl and gt.csv
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(clap::Args)]
pub struct TrainArgs {
    /// Detections file (JSON lines)
    #[arg(long)]
    pub detections: PathBuf,
    /// Ground-truth tracks (CSV)
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Output cost-model file (JSON)
    #[arg(long)]
    pub out: PathBuf,
    /// IoU threshold for matching ground truth to detections
    #[arg(long, default_value_t = 0.5)]
    pub iou: f64,
    /// Longest frame gap a transition may bridge
    #[arg(long, default_value_t = 30)]
    pub max_gap: u64,
    /// Negative training pairs kept per positive
    #[arg(long, default_value_t = 3.0)]
    pub negative_ratio: f64,
    /// Seed for negative-pair subsampling
    #[arg(long, default_value_t = 0)]
    pub pair_seed: u64,
    /// Boosting rounds
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Tree depth limit
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    /// Boosting shrinkage (learning rate)
    #[arg(long, default_value_t = 0.1)]
    pub shrinkage: f64,
    /// Smallest admissible leaf size
    #[arg(long, default_value_t = 5)]
    pub min_leaf: usize,
    /// Fixed intercept of the observation cost model
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub bias: f64,
    /// Track entry cost written into the model
    #[arg(long, default_value_t = 10.0)]
    pub entry_cost: f64,
    /// Track exit cost written into the model
    #[arg(long, default_value_t = 10.0)]
    pub exit_cost: f64,
}

#[derive(clap::Args)]
pub struct TrackArgs {
    /// Detections file (JSON lines)
    #[arg(long)]
    pub detections: PathBuf,
    /// Cost-model file (JSON)
    #[arg(long)]
    pub model: PathBuf,
    /// Output tracks file (CSV)
    #[arg(long)]
    pub out: PathBuf,
    /// Association mode
    #[arg(long, value_enum, default_value_t = Mode::Offline)]
    pub mode: Mode,
    /// Longest frame gap a link may bridge (online keeps tracks alive for
    /// max_gap - 1 missed frames)
    #[arg(long, default_value_t = 30)]
    pub max_gap: u64,
    /// Action recognition window length (frames)
    #[arg(long, default_value_t = 15)]
    pub lambda: u64,
    /// Action score threshold
    #[arg(long, default_value_t = 0.4)]
    pub epsilon: f64,
    /// Override the model's track entry cost
    #[arg(long)]
    pub entry_cost: Option<f64>,
    /// Override the model's track exit cost
    #[arg(long)]
    pub exit_cost: Option<f64>,
    /// Override the model's observation-cost intercept
    #[arg(long, allow_hyphen_values = true)]
    pub bias: Option<f64>,
}

#[derive(clap::Args)]
pub struct RecognizeArgs {
    /// Input tracks file (CSV)
    #[arg(long)]
    pub tracks: PathBuf,
    /// Detections the tracks were built from (JSON lines)
    #[arg(long)]
    pub detections: PathBuf,
    /// Output tracks file (CSV)
    #[arg(long)]
    pub out: PathBuf,
    /// Action recognition window length (frames)
    #[arg(long, default_value_t = 15)]
    pub lambda: u64,
    /// Action score threshold
    #[arg(long, default_value_t = 0.4)]
    pub epsilon: f64,
}

#[derive(clap::Args)]
pub struct EvalMotArgs {
    /// Ground-truth tracks (CSV)
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Hypothesis tracks (CSV)
    #[arg(long)]
    pub tracks: PathBuf,
    /// IoU threshold for a valid match
    #[arg(long, default_value_t = 0.5)]
    pub iou: f64,
    /// Report format
    #[arg(long, value_enum, default_value_t = Report::Table)]
    pub report: Report,
}

#[derive(clap::Args)]
pub struct EvalMapArgs {
    /// Ground-truth tracks with action labels (CSV)
    #[arg(long)]
    pub ground_truth: PathBuf,
    /// Hypothesis tracks (CSV)
    #[arg(long)]
    pub tracks: PathBuf,
    /// Detections the tracks were built from, for per-class scores
    #[arg(long)]
    pub detections: PathBuf,
    /// Scoring window length (frames)
    #[arg(long, default_value_t = 15)]
    pub lambda: u64,
    /// IoU threshold for a valid detection
    #[arg(long, default_value_t = 0.5)]
    pub iou: f64,
    /// Report format
    #[arg(long, value_enum, default_value_t = Report::Table)]
    pub report: Report,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            e.print().expect("cannot write diagnostics");
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Synth(args) => commands::synth(args),
        Command::Train(args) => commands::train(args),
        Command::Track(args) => commands::track(args),
        Command::Recognize(args) => commands::recognize(args),
        Command::EvalMot(args) => commands::eval_mot(args),
        Command::EvalMap(args) => commands::eval_map(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
