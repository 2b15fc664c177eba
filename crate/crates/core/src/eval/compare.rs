use std::fmt::Write as _;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::metrics::{
    classification_metrics, confusion_matrix, ClassificationMetrics, ConfusionMatrix, ConfusionReport,
};
use super::split::SplitIndices;
use crate::dataio::{ArtifactPayload, LabeledDataset};
use crate::error::{Error, Result};
use crate::models::{ModelBundle, ModelKind, ModelParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEvaluation {
    pub model: ModelKind,
    pub name: String,
    pub metrics: ClassificationMetrics,
    pub confusion: ConfusionMatrix,
    /// Wall-clock fit time. Not serialized, so reports stay byte-reproducible.
    #[serde(skip)]
    pub training_seconds: f64,
}

impl ModelEvaluation {
    pub fn confusion_report(&self) -> Result<ConfusionReport> {
        ConfusionReport::new(self.name.clone(), &self.confusion)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    /// The one split every model was trained and tested on.
    pub split: SplitIndices,
    pub feature_names: Vec<String>,
    pub models: Vec<ModelEvaluation>,
    /// Models by accuracy, then weighted F1, best first; equal scores keep report order.
    pub ranking: Vec<ModelKind>,
    pub best_model: ModelKind,
}

impl ArtifactPayload for EvaluationReport {
    const KIND: &'static str = "comparison";
}

fn check_split(dataset: &LabeledDataset, split: &SplitIndices) -> Result<()> {
    let n = dataset.n_samples();
    let mut seen = vec![false; n];
    for &r in split.train_rows.iter().chain(&split.test_rows) {
        if r >= n {
            return Err(Error::InvalidParameter(format!(
                "split row {r} is outside a {n}-row dataset"
            )));
        }
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::InvalidParameter(format!("split row {r} appears twice")));
        }
    }
    if split.train_rows.is_empty() {
        return Err(Error::EmptyInput("split has no training rows".into()));
    }
    if split.test_rows.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    Ok(())
}

/// Score an already fitted model on `test`.
pub fn evaluate_model(bundle: &ModelBundle, test: &LabeledDataset) -> Result<ModelEvaluation> {
    let predictions = bundle.predict(test.features())?;
    let confusion = confusion_matrix(test.labels(), &predictions)?;
    Ok(ModelEvaluation {
        model: bundle.kind(),
        name: bundle.kind().display_name().to_string(),
        metrics: classification_metrics(&confusion)?,
        confusion,
        training_seconds: 0.0,
    })
}

/// Fit on the split's train rows and score on its test rows.
pub fn fit_and_evaluate(
    kind: ModelKind,
    dataset: &LabeledDataset,
    split: &SplitIndices,
    params: &ModelParams,
) -> Result<(ModelBundle, ModelEvaluation)> {
    check_split(dataset, split)?;
    let train = dataset.subset(&split.train_rows);
    let test = dataset.subset(&split.test_rows);
    let start = Instant::now();
    let bundle = ModelBundle::fit(kind, &train, params)?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut eval = evaluate_model(&bundle, &test)?;
    eval.training_seconds = elapsed;
    Ok((bundle, eval))
}

/// Train each requested model on the same train rows and test them on the same
/// test rows. Models appear in `ModelKind::ALL` order regardless of request order.
pub fn compare_models(
    dataset: &LabeledDataset,
    split: &SplitIndices,
    kinds: &[ModelKind],
    params: &ModelParams,
) -> Result<EvaluationReport> {
    let kinds: Vec<ModelKind> = ModelKind::ALL.into_iter().filter(|k| kinds.contains(k)).collect();
    if kinds.is_empty() {
        return Err(Error::InvalidParameter("no models requested".into()));
    }
    let mut models = Vec::with_capacity(kinds.len());
    for kind in kinds {
        models.push(fit_and_evaluate(kind, dataset, split, params)?.1);
    }
    let mut order: Vec<usize> = (0..models.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (&models[a].metrics, &models[b].metrics);
        mb.accuracy
            .total_cmp(&ma.accuracy)
            .then(mb.weighted_f1.total_cmp(&ma.weighted_f1))
            .then(a.cmp(&b))
    });
    let ranking: Vec<ModelKind> = order.iter().map(|&i| models[i].model).collect();
    Ok(EvaluationReport {
        split: split.clone(),
        feature_names: dataset.feature_names().to_vec(),
        best_model: ranking[0],
        ranking,
        models,
    })
}

impl EvaluationReport {
    pub fn get(&self, kind: ModelKind) -> Option<&ModelEvaluation> {
        self.models.iter().find(|m| m.model == kind)
    }

    /// Plain-text table: Model, Accuracy %, F1-score (weighted), then a ranking
    /// line when more than one model was compared.
    pub fn render_table(&self) -> String {
        let width = self
            .models
            .iter()
            .map(|m| m.name.len())
            .max()
            .unwrap_or(0)
            .max("Model".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>10}  {:>8}", "Model", "Accuracy %", "F1-score");
        for m in &self.models {
            let _ = writeln!(
                out,
                "{:<width$}  {:>10.1}  {:>8.3}",
                m.name,
                100.0 * m.metrics.accuracy,
                m.metrics.weighted_f1
            );
        }
        if self.ranking.len() > 1 {
            let names: Vec<&str> = self.ranking.iter().map(|k| k.display_name()).collect();
            let _ = writeln!(out, "Ranking: {}", names.join(" > "));
        }
        let _ = writeln!(out, "Best model: {}", self.best_model.display_name());
        out
    }
}
