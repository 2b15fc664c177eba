//! Train/test splitting, confusion matrices, accuracy and F1, and the
//! side-by-side model comparison.

mod compare;
mod metrics;
mod split;
mod tune;

pub use compare::{compare_models, evaluate_model, fit_and_evaluate, EvaluationReport, ModelEvaluation};
pub use metrics::{
    classification_metrics, confusion_matrix, ClassMetrics, ClassificationMetrics, ConfusionMatrix, ConfusionReport,
};
pub use split::{stratified_split, stratified_subsample, SplitIndices, DEFAULT_SEED, DEFAULT_TEST_FRACTION};
pub use tune::{tune_svm, GridPoint, SvmTuning, SVM_C_GRID, SVM_GAMMA_FACTORS, VALIDATION_FRACTION};
