use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("numeric overflow at block {block}")]
    NumericOverflow { block: usize },

    #[error("singular design matrix (column {column} is linearly dependent)")]
    SingularDesign { column: usize },

    #[error("degenerate series: all observations are equal")]
    DegenerateSeries,

    #[error("AR(1) with |alpha| = {0} >= 1 has no stationary distribution")]
    NotStationary(f64),

    #[error("degenerate distribution: sigma must be positive")]
    DegenerateDistribution,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status for this error: 1 config, 2 I/O, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Domain(_) => 1,
            Error::Io { .. } => 2,
            _ => 3,
        }
    }
}
