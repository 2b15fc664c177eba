use std::path::PathBuf;

use thiserror::Error;

/// Every failure the pipeline can report. Variants are kept distinct so callers
/// (and the CLI's machine-readable error record) can tell them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {0}")]
    MissingFile(PathBuf),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed csv: {0}")]
    Csv(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("label column `{0}` not found in header")]
    MissingLabelColumn(String),

    #[error("unknown label `{value}` at row {row}")]
    UnknownLabel { row: usize, value: String },

    #[error("non-numeric cell `{value}` at row {row}, column `{column}`")]
    NonNumericCell { row: usize, column: String, value: String },

    #[error("non-finite cell at row {row}, column `{column}`")]
    NonFiniteCell { row: usize, column: String },

    #[error("ragged row {row}: expected {expected} values, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },

    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("band edge {edge_hz} Hz is at or above the Nyquist frequency {nyquist_hz} Hz")]
    AboveNyquist { edge_hz: f64, nyquist_hz: f64 },

    #[error("signal too short: {len} samples, need more than {min}")]
    SignalTooShort { len: usize, min: usize },

    #[error("band {low_hz}-{high_hz} Hz lies outside the spectrum range 0-{max_hz} Hz")]
    BandOutOfRange { low_hz: f64, high_hz: f64, max_hz: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate variance: both samples are constant")]
    DegenerateVariance,

    #[error("class {class} has {count} samples, need at least {required}")]
    ClassTooSmall {
        class: usize,
        count: usize,
        required: usize,
    },

    #[error("perplexity {perplexity} infeasible for {n_samples} samples (must be < {limit})")]
    InfeasiblePerplexity {
        perplexity: f64,
        n_samples: usize,
        limit: f64,
    },

    #[error("training requires both classes, found only one")]
    SingleClass,

    #[error("loss became non-finite at epoch {0}; learning rate is likely too large")]
    NonFiniteLoss(usize),

    #[error("label {0} is outside {{0, 1, 2}}")]
    LabelOutOfRange(usize),

    #[error("cannot evaluate an empty prediction set")]
    EmptyEvaluation,

    #[error("artifact schema error: {0}")]
    Schema(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable short identifier for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MissingFile(_) => "missing_file",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::EmptyInput(_) => "empty_input",
            Error::MissingLabelColumn(_) => "missing_label_column",
            Error::UnknownLabel { .. } => "unknown_label",
            Error::NonNumericCell { .. } => "non_numeric_cell",
            Error::NonFiniteCell { .. } => "non_finite_cell",
            Error::RaggedRow { .. } => "ragged_row",
            Error::DuplicateName(_) => "duplicate_name",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::AboveNyquist { .. } => "above_nyquist",
            Error::SignalTooShort { .. } => "signal_too_short",
            Error::BandOutOfRange { .. } => "band_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DegenerateVariance => "degenerate_variance",
            Error::ClassTooSmall { .. } => "class_too_small",
            Error::InfeasiblePerplexity { .. } => "infeasible_perplexity",
            Error::SingleClass => "single_class",
            Error::NonFiniteLoss(_) => "non_finite_loss",
            Error::LabelOutOfRange(_) => "label_out_of_range",
            Error::EmptyEvaluation => "empty_evaluation",
            Error::Schema(_) => "schema",
            Error::Json(_) => "json",
            Error::Config(_) => "config",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
