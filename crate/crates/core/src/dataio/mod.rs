//! Loading feature datasets and raw recordings, synthetic oracles, and the
//! JSON artifact files consumed by the figure renderer.

mod artifact;
mod dataset;
mod recording;
mod synthetic;

pub use artifact::{
    artifact_from_str, artifact_to_string, read_artifact, write_artifact, ArtifactPayload, SCHEMA_VERSION,
};
pub use dataset::{load_feature_dataset, read_feature_csv, write_feature_csv, Emotion, LabeledDataset, N_CLASSES};
pub use recording::{load_raw_eeg, read_raw_eeg, EegRecording};
pub use synthetic::{class_means, generate_synthetic, SyntheticSpec};
