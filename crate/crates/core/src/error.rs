use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} (expected {expected}, got {actual})")]
    Dimension {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid value for {name}: {reason}")]
    InvalidValue { name: &'static str, reason: String },

    #[error("training diverged at iteration {iteration}: loss is {loss}")]
    TrainingDiverged { iteration: usize, loss: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("interpolation vector has zero norm at r = {r}")]
    Singular { r: f64 },

    #[error("undefined quantity: {0}")]
    Undefined(&'static str),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("refusing to build a {p}x{p} Gram matrix (limit is {limit} patterns)")]
    TooLarge { p: usize, limit: usize },

    #[error("parse error in {path}{}: {message}", location.as_ref().map(|l| format!(" at {l}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        location: Option<String>,
        message: String,
    },

    #[error("unsupported model file: {0}")]
    ModelVersion(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "dimension",
            Error::InvalidValue { .. } => "invalid_value",
            Error::TrainingDiverged { .. } => "training_diverged",
            Error::Config(_) => "config",
            Error::Singular { .. } => "singular",
            Error::Undefined(_) => "undefined",
            Error::Numeric(_) => "numeric",
            Error::TooLarge { .. } => "too_large",
            Error::Parse { .. } => "parse",
            Error::ModelVersion(_) => "model_version",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidValue {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension {
            what,
            expected,
            actual,
        })
    }
}
