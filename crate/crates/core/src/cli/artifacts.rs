use serde::{Deserialize, Serialize};

use crate::dataio::{ArtifactPayload, EegRecording, LabeledDataset};
use crate::dsp::FilterSpec;
use crate::error::Result;
use crate::models::{ModelBundle, ModelKind, TrainedModel};

/// Conditioned signal written by `preprocess`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub channels: Vec<String>,
    pub sampling_rate: f64,
    pub source_sampling_rate: f64,
    pub filter: FilterSpec,
    /// `samples[c][k]`, one row per channel.
    pub samples: Vec<Vec<f64>>,
}

impl ArtifactPayload for TimeSeries {
    const KIND: &'static str = "timeseries";
}

impl TimeSeries {
    pub fn new(recording: &EegRecording, source_sampling_rate: f64, filter: FilterSpec) -> Self {
        Self {
            channels: recording.channels().to_vec(),
            sampling_rate: recording.sampling_rate(),
            source_sampling_rate,
            filter,
            samples: recording.samples().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub model: ModelKind,
    pub n_train_rows: usize,
    pub n_features: usize,
    pub train_accuracy: f64,
    /// Objective per accepted epoch (logistic regression only).
    pub loss_history: Vec<f64>,
    /// Whether SMO finished on a clean sweep for every class pair (SVM only).
    pub converged: Option<bool>,
    pub n_support_vectors: Option<usize>,
    pub n_trees: Option<usize>,
}

impl ArtifactPayload for TrainingLog {
    const KIND: &'static str = "training_log";
}

impl TrainingLog {
    pub fn new(bundle: &ModelBundle, train: &LabeledDataset) -> Result<Self> {
        let predictions = bundle.predict(train.features())?;
        let correct = predictions.iter().zip(train.labels()).filter(|(p, t)| p == t).count();
        let mut log = Self {
            model: bundle.kind(),
            n_train_rows: train.n_samples(),
            n_features: train.n_features(),
            train_accuracy: correct as f64 / train.n_samples().max(1) as f64,
            loss_history: Vec::new(),
            converged: None,
            n_support_vectors: None,
            n_trees: None,
        };
        match &bundle.model {
            TrainedModel::LogReg(m) => log.loss_history = m.training_history.clone(),
            TrainedModel::Svm(m) => {
                log.converged = Some(m.converged);
                log.n_support_vectors = Some(m.pairs.iter().map(|p| p.model.alphas.len()).sum());
            }
            TrainedModel::RandomForest(m) => log.n_trees = Some(m.trees.len()),
        }
        Ok(log)
    }
}
