//! Subcommand pipeline behind the `eeg-emotion` binary.
//!
//! Every subcommand reads one TOML config (flags override individual keys),
//! writes its artifacts under `<out>/<subcommand>/`, and records a
//! `manifest.json` at the root of the output directory. A failure writes
//! `<out>/error.json` and exits with status 1.

mod artifacts;
mod commands;
mod config;
mod manifest;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use artifacts::{TimeSeries, TrainingLog};
pub use commands::{condition, Run};
pub use config::{
    AnalysisConfig, DataConfig, DspConfig, EvalConfig, FeatureConfig, ModelSelection, OutputConfig, PipelineConfig,
    RecordingInput,
};
pub use manifest::{sha256_hex, ArtifactRecord, ErrorRecord, Manifest};

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "eeg-emotion",
    version,
    about = "Three-way EEG emotion classification pipeline"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Filter and resample a raw recording; write the signal and its PSD.
    Preprocess,
    /// Turn the configured labelled recordings into a feature CSV.
    Features,
    /// Correlation, per-class significance and a t-SNE embedding.
    Analyze,
    /// Fit the selected model(s) on the training split.
    Train,
    /// Fit and score the selected model(s) one at a time.
    Evaluate,
    /// Fit and score the selected models side by side.
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Preprocess => "preprocess",
            Command::Features => "features",
            Command::Analyze => "analyze",
            Command::Train => "train",
            Command::Evaluate => "evaluate",
            Command::Compare => "compare",
        }
    }
}

fn parse_model(s: &str) -> std::result::Result<ModelSelection, String> {
    match s {
        "lr" => Ok(ModelSelection::Lr),
        "svm" => Ok(ModelSelection::Svm),
        "rf" => Ok(ModelSelection::Rf),
        "all" => Ok(ModelSelection::All),
        _ => Err(format!("expected one of lr, svm, rf, all; got `{s}`")),
    }
}

/// Flags that override config keys.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML config file; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (`output.dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed for the split, the forest and t-SNE.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "F")]
    pub test_fraction: Option<f64>,
    /// lr, svm, rf or all.
    #[arg(long, global = true, value_parser = parse_model)]
    pub model: Option<ModelSelection>,
    /// Significance level for the per-class t-tests.
    #[arg(long, global = true, value_name = "F")]
    pub alpha: Option<f64>,
    #[arg(long, global = true, value_name = "HZ")]
    pub filter_low: Option<f64>,
    #[arg(long, global = true, value_name = "HZ")]
    pub filter_high: Option<f64>,
    /// Train only on features significant for at least one class.
    #[arg(long, global = true)]
    pub significant_only: bool,
    /// Tune SVM C and gamma on a holdout of the training rows.
    #[arg(long, global = true)]
    pub grid_search: bool,
    /// Feature CSV (`dataio.feature_csv`).
    #[arg(long, global = true, value_name = "PATH")]
    pub features: Option<PathBuf>,
    /// Raw EEG CSV (`dataio.raw_eeg`).
    #[arg(long, global = true, value_name = "PATH")]
    pub raw: Option<PathBuf>,
}

impl Overrides {
    /// Load the config file (or defaults) and apply every flag given.
    pub fn resolve(&self) -> Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(d) = &self.out {
            cfg.output.dir = d.clone();
        }
        if let Some(s) = self.seed {
            cfg.set_seed(s);
        }
        if let Some(f) = self.test_fraction {
            cfg.eval.test_fraction = f;
        }
        if let Some(m) = self.model {
            cfg.eval.model = m;
        }
        if let Some(a) = self.alpha {
            cfg.analysis.alpha = a;
        }
        if let Some(hz) = self.filter_low {
            cfg.dsp.filter.low_hz = hz;
        }
        if let Some(hz) = self.filter_high {
            cfg.dsp.filter.high_hz = hz;
        }
        if self.significant_only {
            cfg.analysis.significant_only = true;
        }
        if self.grid_search {
            cfg.eval.grid_search = true;
        }
        if let Some(p) = &self.features {
            cfg.dataio.feature_csv = Some(p.clone());
        }
        if let Some(p) = &self.raw {
            cfg.dataio.raw_eeg = Some(p.clone());
        }
        Ok(cfg)
    }
}

/// Run one subcommand to completion and write its manifest. Nothing is
/// printed.
pub fn run_subcommand(command: Command, config: &PipelineConfig) -> Result<Manifest> {
    execute(command, config).map(|(manifest, _)| manifest)
}

/// Like [`run_subcommand`], also returning the text meant for stdout.
pub fn execute(command: Command, config: &PipelineConfig) -> Result<(Manifest, String)> {
    let mut run = Run::new(command.name(), config);
    std::fs::create_dir_all(&run.out).map_err(|e| Error::io(&run.out, e))?;
    match command {
        Command::Preprocess => commands::preprocess(&mut run)?,
        Command::Features => commands::features(&mut run)?,
        Command::Analyze => commands::analyze(&mut run)?,
        Command::Train => commands::train(&mut run)?,
        Command::Evaluate => commands::evaluate(&mut run)?,
        Command::Compare => {
            commands::compare(&mut run)?;
        }
    }
    let summary = std::mem::take(&mut run.summary);
    Ok((run.finish()?, summary))
}

fn report_failure(command: Command, out: Option<&PathBuf>, err: &Error) {
    let record = ErrorRecord::new(command.name(), err);
    let text = serde_json::to_string_pretty(&record).unwrap_or_else(|_| err.to_string());
    eprintln!("{text}");
    if let Some(dir) = out {
        if std::fs::create_dir_all(dir).is_ok() {
            let _ = std::fs::write(dir.join("error.json"), text + "\n");
        }
    }
}

/// Entry point shared by the binary and the tests. Returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let config = match cli.overrides.resolve() {
        Ok(c) => c,
        Err(e) => {
            report_failure(cli.command, cli.overrides.out.as_ref(), &e);
            return 1;
        }
    };
    match execute(cli.command, &config) {
        Ok((manifest, summary)) => {
            for notice in &manifest.notices {
                eprintln!("notice: {notice}");
            }
            print!("{summary}");
            0
        }
        Err(e) => {
            report_failure(cli.command, Some(&config.output.dir), &e);
            1
        }
    }
}
