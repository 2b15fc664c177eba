//! Sliding windows, per-window descriptors and train-fitted standardization.

mod features;
mod standardize;
mod windows;

pub use features::{
    concat_datasets, descriptive_statistics, featurize_recording, window_features, FeatureVector, FEATURES_PER_CHANNEL,
    STATISTICS,
};
pub use standardize::{apply_standardizer, fit_standardizer, Standardizer};
pub use windows::{sliding_windows, WindowPlan, WindowSegment};
