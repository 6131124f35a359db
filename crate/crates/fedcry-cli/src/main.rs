//! `fedcry` command-line front-end.
//!
//! Subcommands cover the whole pipeline: `synth` builds a labeled WAV
//! corpus, `features` turns it into MFCC tables, `train-central` and
//! `train-fed` fit the classifier, `eval` scores a model on a feature
//! table, and `diagnose` runs the inference chain on one recording.
//!
//! Every randomized step derives its stream from the single `--seed`
//! flag, so identical invocations produce byte-identical artifacts.
//! Exit codes are stable for scripting: 0 success, 1 usage error,
//! 2 data error, 3 internal error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigFile;

#[derive(Parser, Debug)]
#[command(name = "fedcry", version, about = "Infant-cry classification pipeline")]
pub struct Cli {
    /// Base seed for every randomized operation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory where artifacts are written.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Key-value config file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a labeled synthetic cry corpus as WAV files plus a manifest.
    Synth(SynthArgs),
    /// Extract MFCC features from a corpus directory into a CSV table.
    Features(FeaturesArgs),
    /// Train a centralized SVM on a feature table.
    TrainCentral(TrainCentralArgs),
    /// Train with cross-silo federated averaging on a feature table.
    TrainFed(TrainFedArgs),
    /// Classify a single WAV recording with a trained model.
    Diagnose(DiagnoseArgs),
    /// Score a trained model against a labeled feature table.
    Eval(EvalArgs),
}

#[derive(Args, Debug, Default)]
pub struct SynthArgs {
    #[arg(long)]
    pub n_normal: Option<usize>,
    #[arg(long)]
    pub n_asphyxia: Option<usize>,
    #[arg(long)]
    pub duration_ms: Option<u32>,
    #[arg(long)]
    pub sample_rate: Option<u32>,
    #[arg(long)]
    pub normal_f0_low: Option<f64>,
    #[arg(long)]
    pub normal_f0_high: Option<f64>,
    #[arg(long)]
    pub asphyxia_f0_low: Option<f64>,
    #[arg(long)]
    pub asphyxia_f0_high: Option<f64>,
    #[arg(long)]
    pub asphyxia_noise_db: Option<f64>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct MfccArgs {
    #[arg(long)]
    pub frame_ms: Option<f64>,
    #[arg(long)]
    pub hop_ms: Option<f64>,
    #[arg(long)]
    pub n_mels: Option<usize>,
    #[arg(long)]
    pub n_coeffs: Option<usize>,
    #[arg(long)]
    pub fmin_hz: Option<f64>,
    #[arg(long)]
    pub fmax_hz: Option<f64>,
    #[arg(long)]
    pub log_floor: Option<f64>,
}

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    /// Corpus root with `normal/` and `asphyxia/` WAV subfolders.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Optional selector JSON; reduces feature columns.
    #[arg(long)]
    pub selector: Option<PathBuf>,
    #[command(flatten)]
    pub mfcc: MfccArgs,
}

#[derive(Args, Debug, Default, Clone)]
pub struct TrainParamArgs {
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta1: Option<f64>,
    #[arg(long)]
    pub beta2: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Fit a random-forest selector on the train split and keep the top-k
    /// features.
    #[arg(long)]
    pub select_k: Option<usize>,
    /// Also write the fitted selector to this path (requires --select-k).
    #[arg(long)]
    pub selector_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainCentralArgs {
    /// Feature CSV produced by `features`.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[command(flatten)]
    pub params: TrainParamArgs,
}

#[derive(Args, Debug)]
pub struct TrainFedArgs {
    /// Feature CSV produced by `features`.
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub num_silos: Option<usize>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub local_epochs: Option<usize>,
    #[arg(long)]
    pub client_fraction: Option<f64>,
    #[arg(long, value_enum)]
    pub partition: Option<PartitionArg>,
    #[arg(long)]
    pub dirichlet_alpha: Option<f64>,
    /// Stop once the loss stalls for five consecutive rounds.
    #[arg(long)]
    pub early_stop: bool,
    #[command(flatten)]
    pub params: TrainParamArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum PartitionArg {
    IidEqual,
    Dirichlet,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    /// Recording to classify.
    #[arg(long)]
    pub wav: PathBuf,
    /// Trained model JSON.
    #[arg(long)]
    pub model: PathBuf,
    /// Fraction of positive windows needed for an asphyxia verdict.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub vad_frame_ms: Option<f64>,
    #[arg(long)]
    pub vad_threshold_db: Option<f64>,
    #[arg(long)]
    pub vad_hangover: Option<usize>,
    #[arg(long)]
    pub low_cut_hz: Option<f64>,
    #[arg(long)]
    pub high_cut_hz: Option<f64>,
    #[arg(long)]
    pub filter_order: Option<usize>,
    #[command(flatten)]
    pub mfcc: MfccArgs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Labeled feature CSV.
    #[arg(long)]
    pub features: PathBuf,
    /// Trained model JSON.
    #[arg(long)]
    pub model: PathBuf,
}

/// Failure classified by exit code.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
            AppError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Data(m) | AppError::Internal(m) => m,
        }
    }
}

impl From<fedcry::Error> for AppError {
    fn from(e: fedcry::Error) -> Self {
        AppError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Data(format!("JSON: {e}"))
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Data(format!("I/O: {e}"))
    }
}

/// Settings shared by every command after flag/config resolution.
pub struct Context {
    pub seed: u64,
    pub out: PathBuf,
    pub verbose: bool,
    pub config: ConfigFile,
}

fn run(cli: Cli) -> Result<(), AppError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let ctx = Context {
        seed: config.resolve(cli.seed, "seed", 42)?,
        out: config.resolve(cli.out, "out", PathBuf::from("out"))?,
        verbose: cli.verbose,
        config,
    };
    match cli.command {
        Command::Synth(args) => commands::synth::run(&ctx, &args),
        Command::Features(args) => commands::features::run(&ctx, &args),
        Command::TrainCentral(args) => commands::train::run_central(&ctx, &args),
        Command::TrainFed(args) => commands::train::run_fed(&ctx, &args),
        Command::Diagnose(args) => commands::diagnose::run(&ctx, &args),
        Command::Eval(args) => commands::eval::run(&ctx, &args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits; everything else is usage
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("error: internal panic");
            ExitCode::from(3)
        }
    }
}
