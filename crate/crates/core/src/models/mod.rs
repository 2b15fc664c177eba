//! The three classifiers. Each trains from a [`LabeledDataset`](crate::dataio::LabeledDataset)
//! and predicts class indices for a feature matrix.

mod classifier;
pub mod forest;
pub mod logreg;
pub mod svm;

pub use classifier::{train_model, ModelBundle, ModelKind, ModelParams, TrainedModel};
pub use forest::{
    gini, mode, predict_rf, train_rf, DecisionTree, ForestParams, RandomForestModel, TrainingSchedule, TreeNode,
};
pub use logreg::{
    loss_and_gradient, predict_logreg, sigmoid, train_logreg, LogRegModel, LogRegParams, SoftmaxParameters,
};
pub use svm::{
    predict_svm, rbf_kernel, scale_gamma, train_svm, train_svm_binary, vote, Gamma, PairwiseSvm, SmoFit,
    SvmBinaryModel, SvmEnsemble, SvmParams,
};
