use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("dialog `{0}` contains no segments")]
    EmptyDialog(String),

    #[error("unknown label `{label}` for tag set {variant}")]
    UnknownLabel { label: String, variant: String },

    #[error("labels without a mapping entry: {}", .0.join(", "))]
    UnmappedLabels(Vec<String>),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite feature value in sample {sample}")]
    NonFinite { sample: usize },

    #[error("class `{class}`: {source}")]
    Class {
        class: String,
        #[source]
        source: Box<Error>,
    },

    #[error("feature id {id} out of range for model with {n_features} features")]
    FeatureOutOfRange { id: u32, n_features: usize },

    #[error("unsupported model format version `{0}`")]
    Version(String),

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("model does not match input: {0}")]
    Mismatch(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad configuration rather than failures at run time.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_))
    }
}
