use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::TsneParams;
use crate::dataio::Emotion;
use crate::dsp::{FilterSpec, WelchConfig};
use crate::error::{Error, Result};
use crate::eval::{DEFAULT_SEED, DEFAULT_TEST_FRACTION};
use crate::featext::WindowPlan;
use crate::models::{ModelKind, ModelParams};

/// Everything a pipeline run needs. Sections mirror the library modules; every
/// key has a default and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub dataio: DataConfig,
    pub dsp: DspConfig,
    pub featext: FeatureConfig,
    pub analysis: AnalysisConfig,
    pub models: ModelParams,
    pub eval: EvalConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataConfig {
    /// Feature table read by `analyze`, `train`, `evaluate` and `compare`.
    pub feature_csv: Option<PathBuf>,
    pub label_column: String,
    /// Raw recording read by `preprocess`.
    pub raw_eeg: Option<PathBuf>,
    /// Sampling rate of raw recordings that do not set their own.
    pub sampling_rate: f64,
    /// Labelled raw recordings turned into a feature table by `features`.
    pub recordings: Vec<RecordingInput>,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            feature_csv: None,
            label_column: "label".into(),
            raw_eeg: None,
            sampling_rate: 256.0,
            recordings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordingInput {
    pub path: PathBuf,
    pub label: Emotion,
    pub sampling_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DspConfig {
    pub filter: FilterSpec,
    /// Resample to this rate after filtering; `None` keeps the input rate.
    pub target_rate: Option<f64>,
    pub welch: WelchConfig,
}

impl Default for DspConfig {
    fn default() -> Self {
        Self {
            filter: FilterSpec::default(),
            target_rate: Some(150.0),
            welch: WelchConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeatureConfig {
    pub windows: WindowPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisConfig {
    pub alpha: f64,
    /// Keep only features significant for at least one class (fitted on the
    /// training rows) before training.
    pub significant_only: bool,
    /// Rows fed to t-SNE, drawn per class.
    pub tsne_max_rows: usize,
    pub tsne: TsneParams,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            significant_only: false,
            tsne_max_rows: 1000,
            tsne: TsneParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSelection {
    Lr,
    Svm,
    Rf,
    #[default]
    All,
}

impl ModelSelection {
    pub fn kinds(self) -> Vec<ModelKind> {
        match self {
            ModelSelection::Lr => vec![ModelKind::Lr],
            ModelSelection::Svm => vec![ModelKind::Svm],
            ModelSelection::Rf => vec![ModelKind::Rf],
            ModelSelection::All => ModelKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalConfig {
    pub test_fraction: f64,
    pub seed: u64,
    pub model: ModelSelection,
    /// Pick SVM C and gamma by grid search on a holdout of the training rows.
    pub grid_search: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            test_fraction: DEFAULT_TEST_FRACTION,
            seed: DEFAULT_SEED,
            model: ModelSelection::All,
            grid_search: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// One seed drives the split, the forest and t-SNE.
    pub fn set_seed(&mut self, seed: u64) {
        self.eval.seed = seed;
        self.models.forest.seed = seed;
        self.analysis.tsne.seed = seed;
    }

    pub fn feature_csv(&self) -> Result<&Path> {
        self.dataio
            .feature_csv
            .as_deref()
            .ok_or_else(|| Error::Config("dataio.feature_csv is not set (use --features)".into()))
    }

    pub fn raw_eeg(&self) -> Result<&Path> {
        self.dataio
            .raw_eeg
            .as_deref()
            .ok_or_else(|| Error::Config("dataio.raw_eeg is not set (use --raw)".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(PipelineConfig::from_toml("").unwrap(), PipelineConfig::default());
    }

    #[test]
    fn unknown_key_rejected() {
        let err = PipelineConfig::from_toml("[eval]\ntest_fractoin = 0.2\n").unwrap_err();
        assert_eq!(err.kind(), "config");
        assert!(PipelineConfig::from_toml("[nonsense]\n").is_err());
    }

    #[test]
    fn nested_sections() {
        let text = r#"
            [dataio]
            feature_csv = "data/emotions.csv"

            [dsp.filter]
            low_hz = 1.0

            [models.svm]
            c = 10.0
            gamma = { value = 0.01 }

            [models.forest]
            n_trees = 50
            mtry = 7

            [[dataio.recordings]]
            path = "a.csv"
            label = "POSITIVE"
        "#;
        let cfg = PipelineConfig::from_toml(text).unwrap();
        assert_eq!(cfg.dsp.filter.low_hz, 1.0);
        assert_eq!(cfg.dsp.filter.high_hz, 45.0);
        assert_eq!(cfg.models.svm.c, 10.0);
        assert_eq!(cfg.models.forest.mtry, Some(7));
        assert_eq!(cfg.dataio.recordings[0].label, Emotion::Positive);
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = PipelineConfig::default();
        cfg.dataio.feature_csv = Some("x.csv".into());
        cfg.models.forest.max_depth = Some(12);
        cfg.set_seed(7);
        let back = PipelineConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
