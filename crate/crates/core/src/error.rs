use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: expected 7 comma-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },

    #[error("line {line}: non-numeric token {token:?}")]
    Parse { line: usize, token: String },

    #[error("line {line}: selector value {value} is not 1 or 2")]
    SelectorValue { line: usize, value: f64 },

    #[error("feature column {column:?} is constant and cannot be min-max normalized")]
    ConstantColumn { column: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid fuzzy system: {0}")]
    InvalidFis(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error(
        "grid partition would create {rules} rules (cap {cap}); use the clustering method instead"
    )]
    RuleCap { rules: usize, cap: usize },

    #[error("least-squares system is numerically singular ({0}); retry with ridge_lambda > 0")]
    Singular(String),

    #[error("objective is not finite at initial point {point:?}")]
    ObjectiveNonFinite { point: Vec<f64> },

    #[error("label {0} is not in {{0, 1}}")]
    InvalidLabel(u8),

    #[error("malformed document: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
