use serde::{Deserialize, Serialize};

use super::forest::{train_rf, ForestParams, RandomForestModel};
use super::logreg::{train_logreg, LogRegModel, LogRegParams};
use super::svm::{train_svm, SvmEnsemble, SvmParams};
use crate::dataio::{ArtifactPayload, LabeledDataset};
use crate::error::{Error, Result};
use crate::featext::Standardizer;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Lr,
    Svm,
    Rf,
}

impl ModelKind {
    /// Report order.
    pub const ALL: [ModelKind; 3] = [ModelKind::Lr, ModelKind::Svm, ModelKind::Rf];

    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Lr => "Logistic Regression",
            ModelKind::Svm => "SVM",
            ModelKind::Rf => "Random Forest",
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            ModelKind::Lr => "lr",
            ModelKind::Svm => "svm",
            ModelKind::Rf => "rf",
        }
    }

    pub fn parse(s: &str) -> Option<ModelKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lr" | "logreg" => Some(ModelKind::Lr),
            "svm" => Some(ModelKind::Svm),
            "rf" | "forest" => Some(ModelKind::Rf),
            _ => None,
        }
    }

    /// LR and SVM see standardized features; the forest sees raw ones.
    pub fn wants_standardized(self) -> bool {
        !matches!(self, ModelKind::Rf)
    }
}

/// Hyperparameters for all three classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    pub logreg: LogRegParams,
    pub svm: SvmParams,
    pub forest: ForestParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    LogReg(LogRegModel),
    Svm(SvmEnsemble),
    RandomForest(RandomForestModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::LogReg(_) => ModelKind::Lr,
            TrainedModel::Svm(_) => ModelKind::Svm,
            TrainedModel::RandomForest(_) => ModelKind::Rf,
        }
    }

    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        match self {
            TrainedModel::LogReg(m) => m.predict(features),
            TrainedModel::Svm(m) => m.predict(features),
            TrainedModel::RandomForest(m) => m.predict(features),
        }
    }
}

/// Train `kind` on `train` as given; no scaling is applied here.
pub fn train_model(kind: ModelKind, train: &LabeledDataset, params: &ModelParams) -> Result<TrainedModel> {
    Ok(match kind {
        ModelKind::Lr => TrainedModel::LogReg(train_logreg(train, &params.logreg)?),
        ModelKind::Svm => TrainedModel::Svm(train_svm(train, &params.svm)?),
        ModelKind::Rf => TrainedModel::RandomForest(train_rf(train, &params.forest)?),
    })
}

/// A model together with the scaling it expects, so raw feature rows can be fed
/// straight to `predict`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub feature_names: Vec<String>,
    pub standardizer: Option<Standardizer>,
    pub model: TrainedModel,
}

impl ArtifactPayload for ModelBundle {
    const KIND: &'static str = "model";
}

impl ModelBundle {
    /// Fit the scaling (when the model kind uses it) and the model on `train`.
    pub fn fit(kind: ModelKind, train: &LabeledDataset, params: &ModelParams) -> Result<Self> {
        let (standardizer, model) = if kind.wants_standardized() {
            let s = Standardizer::fit(train.features())?;
            let scaled = train.with_features(s.transform(train.features())?)?;
            (Some(s), train_model(kind, &scaled, params)?)
        } else {
            (None, train_model(kind, train, params)?)
        };
        Ok(Self {
            feature_names: train.feature_names().to_vec(),
            standardizer,
            model,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    pub fn predict(&self, raw: &Matrix) -> Result<Vec<usize>> {
        if raw.cols() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                found: raw.cols(),
            });
        }
        match &self.standardizer {
            Some(s) => self.model.predict(&s.transform(raw)?),
            None => self.model.predict(raw),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{artifact_from_str, artifact_to_string, generate_synthetic, SyntheticSpec};

    #[test]
    fn kind_parsing() {
        assert_eq!(ModelKind::parse("LR"), Some(ModelKind::Lr));
        assert_eq!(ModelKind::parse("forest"), Some(ModelKind::Rf));
        assert_eq!(ModelKind::parse("knn"), None);
    }

    #[test]
    fn json_round_trip_predicts_identically() {
        let ds = generate_synthetic(&SyntheticSpec::new(15, 4, 2.0, 5)).unwrap();
        let probe = generate_synthetic(&SyntheticSpec::new(10, 4, 2.0, 6)).unwrap();
        let mut params = ModelParams::default();
        params.forest.n_trees = 10;
        for kind in ModelKind::ALL {
            let bundle = ModelBundle::fit(kind, &ds, &params).unwrap();
            let text = artifact_to_string(&bundle).unwrap();
            let back: ModelBundle = artifact_from_str(&text).unwrap();
            assert_eq!(back, bundle);
            assert_eq!(
                back.predict(probe.features()).unwrap(),
                bundle.predict(probe.features()).unwrap()
            );
        }
    }
}
