//! Error type shared by every estimator and the simulation harness.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {what} = {value} ({reason})")]
    Domain {
        what: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Sample construction rejected one or more observations.
    #[error("invalid sample: {reason} at indices {indices:?}")]
    InvalidSample {
        reason: &'static str,
        indices: Vec<usize>,
    },

    #[error("sample too small: need at least {min} observations, got {got}")]
    SampleTooSmall { min: usize, got: usize },

    /// The sample carries no spread, so the estimator is undefined.
    #[error("degenerate sample: {0}")]
    Degenerate(&'static str),

    #[error("invalid L-moment ratio m2/m1 = {ratio}; need 0 < ratio < 1")]
    InvalidRatio { ratio: f64 },

    #[error("no sign change found in bracket [{low}, {high}]")]
    BracketFailure { low: f64, high: f64 },

    #[error("optimization failed: {0}")]
    Optimization(&'static str),

    #[error("singular system: {0}")]
    Singular(&'static str),

    #[error("overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("no weight medians available for n = {n}")]
    MissingWeights { n: usize },

    #[error("weights were simulated for n = {weights_n} but the sample has n = {sample_n}")]
    WeightSizeMismatch { weights_n: usize, sample_n: usize },

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("empty metric cell for {0}")]
    EmptyCell(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl Error {
    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::InvalidSample { .. } => "invalid_sample",
            Error::SampleTooSmall { .. } => "sample_too_small",
            Error::Degenerate(_) => "degenerate_sample",
            Error::InvalidRatio { .. } => "invalid_ratio",
            Error::BracketFailure { .. } => "bracket_failure",
            Error::Optimization(_) => "optimization",
            Error::Singular(_) => "singular",
            Error::Overflow(_) => "overflow",
            Error::MissingWeights { .. } => "missing_weights",
            Error::WeightSizeMismatch { .. } => "weight_size_mismatch",
            Error::Config { .. } => "config",
            Error::EmptyCell(_) => "empty_cell",
            Error::UnknownMethod(_) => "unknown_method",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
        }
    }
}
