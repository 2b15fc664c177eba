//! Three-way EEG emotion classification.
//!
//! The crate covers the whole workflow: loading feature tables and raw
//! recordings ([`dataio`]), band-pass filtering and spectral estimation
//! ([`dsp`]), windowed feature extraction ([`featext`]), feature statistics and
//! t-SNE ([`analysis`]), three classifiers written from scratch ([`models`]),
//! the shared evaluation protocol ([`eval`]) and the subcommand pipeline
//! ([`cli`]) behind the `eeg-emotion` binary.

pub mod analysis;
pub mod cli;
pub mod dataio;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod featext;
pub mod matrix;
pub mod models;

pub use error::{Error, Result};
pub use matrix::Matrix;
