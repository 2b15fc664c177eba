use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use super::artifacts::{TimeSeries, TrainingLog};
use super::config::PipelineConfig;
use super::manifest::Manifest;
use crate::analysis::{correlation_matrix, significance_summary, tsne_embed};
use crate::dataio::{
    load_feature_dataset, load_raw_eeg, write_artifact, write_feature_csv, ArtifactPayload, EegRecording,
    LabeledDataset,
};
use crate::dsp::{bandpass_filter, resample, welch_psd};
use crate::error::{Error, Result};
use crate::eval::{compare_models, stratified_split, stratified_subsample, tune_svm, EvaluationReport, SplitIndices};
use crate::featext::{concat_datasets, featurize_recording, Standardizer};
use crate::models::{ModelBundle, ModelKind, ModelParams};

/// Shared state for one subcommand run.
pub struct Run<'a> {
    pub config: &'a PipelineConfig,
    pub out: PathBuf,
    pub manifest: Manifest,
    /// Text for stdout, printed by the CLI entry point.
    pub summary: String,
}

impl<'a> Run<'a> {
    pub fn new(subcommand: &str, config: &'a PipelineConfig) -> Self {
        Self {
            config,
            out: config.output.dir.clone(),
            manifest: Manifest::new(subcommand, config),
            summary: String::new(),
        }
    }

    fn dir(&self, sub: &str) -> Result<PathBuf> {
        let d = self.out.join(sub);
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
        Ok(d)
    }

    fn write<T: ArtifactPayload>(&mut self, sub: &str, name: &str, payload: &T) -> Result<PathBuf> {
        let path = self.dir(sub)?.join(name);
        write_artifact(payload, &path)?;
        self.manifest.record(&self.out, &path)?;
        Ok(path)
    }

    fn write_text(&mut self, sub: &str, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.dir(sub)?.join(name);
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.manifest.record(&self.out, &path)?;
        Ok(path)
    }

    fn time<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let value = f(self)?;
        self.manifest
            .timings
            .insert(stage.to_string(), start.elapsed().as_secs_f64());
        Ok(value)
    }

    fn notice(&mut self, text: String) {
        self.manifest.notices.push(text);
    }

    pub fn finish(self) -> Result<Manifest> {
        self.manifest.write(&self.out)?;
        Ok(self.manifest)
    }
}

/// Band-pass, then resample when a target rate is configured.
pub fn condition(recording: &EegRecording, config: &PipelineConfig) -> Result<EegRecording> {
    let filtered = bandpass_filter(recording, &config.dsp.filter)?;
    match config.dsp.target_rate {
        Some(rate) => resample(&filtered, rate),
        None => Ok(filtered),
    }
}

pub fn preprocess(run: &mut Run) -> Result<()> {
    let cfg = run.config;
    let raw = load_raw_eeg(cfg.raw_eeg()?, cfg.dataio.sampling_rate)?;
    let clean = run.time("condition", |_| condition(&raw, cfg))?;
    let psd = run.time("psd", |_| welch_psd(&clean, &cfg.dsp.welch))?;
    let series = TimeSeries::new(&clean, raw.sampling_rate(), cfg.dsp.filter);
    run.write("preprocess", "timeseries.json", &series)?;
    run.write("preprocess", "psd.json", &psd)?;
    Ok(())
}

pub fn features(run: &mut Run) -> Result<()> {
    let cfg = run.config;
    if cfg.dataio.recordings.is_empty() {
        return Err(Error::Config("no [[dataio.recordings]] entries to featurize".into()));
    }
    let parts = run.time("featurize", |_| {
        cfg.dataio
            .recordings
            .iter()
            .map(|input| {
                let rate = input.sampling_rate.unwrap_or(cfg.dataio.sampling_rate);
                let clean = condition(&load_raw_eeg(&input.path, rate)?, cfg)?;
                featurize_recording(&clean, input.label, &cfg.featext.windows, &cfg.dsp.welch)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let dataset = concat_datasets(&parts)?;
    let path = run.dir("features")?.join("features.csv");
    write_feature_csv(&dataset, &path)?;
    run.manifest.record(&run.out, &path)?;
    Ok(())
}

fn load_dataset(cfg: &PipelineConfig) -> Result<LabeledDataset> {
    load_feature_dataset(cfg.feature_csv()?, &cfg.dataio.label_column)
}

pub fn analyze(run: &mut Run) -> Result<()> {
    let cfg = run.config;
    let ds = load_dataset(cfg)?;
    let corr = run.time("correlation", |_| correlation_matrix(ds.features(), ds.feature_names()))?;
    run.write("analyze", "correlation.json", &corr)?;
    let sig = run.time("significance", |_| significance_summary(&ds, cfg.analysis.alpha))?;
    run.write("analyze", "significance.json", &sig)?;

    let rows = stratified_subsample(&ds, cfg.analysis.tsne_max_rows, cfg.analysis.tsne.seed);
    let sample = ds.subset(&rows);
    let scaled = Standardizer::fit(sample.features())?.transform(sample.features())?;
    match run.time("tsne", |_| tsne_embed(&scaled, &cfg.analysis.tsne)) {
        Ok(mut emb) => {
            emb.labels = sample.labels().to_vec();
            run.write("analyze", "embedding.json", &emb)?;
        }
        Err(e @ Error::InfeasiblePerplexity { .. }) => run.notice(format!("t-SNE skipped: {e}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Split, then optionally keep only features found significant on the
/// training rows.
fn prepare(run: &mut Run) -> Result<(LabeledDataset, SplitIndices)> {
    let cfg = run.config;
    let ds = load_dataset(cfg)?;
    let split = stratified_split(&ds, cfg.eval.test_fraction, cfg.eval.seed)?;
    if !cfg.analysis.significant_only {
        return Ok((ds, split));
    }
    let sig = significance_summary(&ds.subset(&split.train_rows), cfg.analysis.alpha)?;
    let keep = sig.significant_features();
    if keep.is_empty() {
        run.notice("no feature is significant on the training rows; keeping all features".into());
        return Ok((ds, split));
    }
    run.notice(format!(
        "keeping {} of {} features significant at alpha = {}",
        keep.len(),
        ds.n_features(),
        cfg.analysis.alpha
    ));
    Ok((ds.select_features(&keep), split))
}

/// Configured hyperparameters, with SVM C and gamma replaced by a grid search
/// on the training rows when enabled.
fn model_params(run: &mut Run, ds: &LabeledDataset, split: &SplitIndices) -> Result<ModelParams> {
    let cfg = run.config;
    let mut params = cfg.models;
    if !cfg.eval.grid_search || !cfg.eval.model.kinds().contains(&ModelKind::Svm) {
        return Ok(params);
    }
    let tuning = run.time("grid_search_svm", |_| {
        tune_svm(&ds.subset(&split.train_rows), &params.svm, cfg.eval.seed)
    })?;
    run.notice(format!(
        "SVM grid search chose C = {}, gamma = {:.6} (validation accuracy {:.4})",
        tuning.best.c, tuning.best.gamma, tuning.best.validation_accuracy
    ));
    params.svm = tuning.params;
    Ok(params)
}

pub fn train(run: &mut Run) -> Result<()> {
    let cfg = run.config;
    let (ds, split) = prepare(run)?;
    let params = model_params(run, &ds, &split)?;
    let train_ds = ds.subset(&split.train_rows);
    for kind in cfg.eval.model.kinds() {
        let bundle = run.time(&format!("train_{}", kind.id()), |_| {
            ModelBundle::fit(kind, &train_ds, &params)
        })?;
        let log = TrainingLog::new(&bundle, &train_ds)?;
        run.write("train", &format!("model_{}.json", kind.id()), &bundle)?;
        run.write("train", &format!("log_{}.json", kind.id()), &log)?;
    }
    Ok(())
}

fn record_fit_times(run: &mut Run, report: &EvaluationReport) {
    for m in &report.models {
        run.manifest
            .timings
            .insert(format!("train_{}", m.model.id()), m.training_seconds);
    }
}

pub fn evaluate(run: &mut Run) -> Result<()> {
    let cfg = run.config;
    let (ds, split) = prepare(run)?;
    let params = model_params(run, &ds, &split)?;
    for kind in cfg.eval.model.kinds() {
        let report = compare_models(&ds, &split, &[kind], &params)?;
        record_fit_times(run, &report);
        let eval = &report.models[0];
        run.write("evaluate", &format!("report_{}.json", kind.id()), &report)?;
        run.write(
            "evaluate",
            &format!("confusion_{}.json", kind.id()),
            &eval.confusion_report()?,
        )?;
        run.summary.push_str(&format!(
            "{}: accuracy {:.4}, weighted F1 {:.4}\n",
            eval.name, eval.metrics.accuracy, eval.metrics.weighted_f1
        ));
    }
    Ok(())
}

pub fn compare(run: &mut Run) -> Result<EvaluationReport> {
    let cfg = run.config;
    let (ds, split) = prepare(run)?;
    let params = model_params(run, &ds, &split)?;
    let report = compare_models(&ds, &split, &cfg.eval.model.kinds(), &params)?;
    record_fit_times(run, &report);
    run.write("compare", "comparison.json", &report)?;
    for m in &report.models {
        run.write(
            "compare",
            &format!("confusion_{}.json", m.model.id()),
            &m.confusion_report()?,
        )?;
    }
    let table = report.render_table();
    run.write_text("compare", "table.txt", &table)?;
    run.summary.push_str(&table);
    Ok(report)
}
