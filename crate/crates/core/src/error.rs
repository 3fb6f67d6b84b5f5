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

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("row {row}, column {column:?}: cannot parse {value:?} as a finite number")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },

    #[error("target column {0:?} not found")]
    MissingTarget(String),

    #[error("duplicate column name {0:?}")]
    DuplicateColumn(String),

    #[error("need at least {min} rows, found {found}")]
    TooFewRows { min: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("column {column:?} row {row}: logarithm of non-positive value {value}")]
    NonPositiveLog {
        column: String,
        row: usize,
        value: f64,
    },

    #[error("exhaustive search over {k} predictors exceeds the limit of {limit}; pass an explicit override")]
    TooManyPredictors { k: usize, limit: usize },

    #[error("information criterion undefined for mse = {0}")]
    UndefinedCriterion(f64),

    #[error("{0}")]
    EmptySelection(String),
}

impl Error {
    /// Stable short identifier, used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "E_IO",
            Error::Csv(_) => "E_CSV",
            Error::Parse { .. } => "E_PARSE",
            Error::MissingTarget(_) => "E_TARGET",
            Error::DuplicateColumn(_) => "E_DUPLICATE",
            Error::TooFewRows { .. } => "E_ROWS",
            Error::Dimension(_) => "E_DIM",
            Error::InvalidParameter(_) => "E_PARAM",
            Error::NonFinite(_) => "E_NONFINITE",
            Error::NonPositiveLog { .. } => "E_LOG",
            Error::TooManyPredictors { .. } => "E_TOO_LARGE",
            Error::UndefinedCriterion(_) => "E_CRITERION",
            Error::EmptySelection(_) => "E_EMPTY",
        }
    }
}
