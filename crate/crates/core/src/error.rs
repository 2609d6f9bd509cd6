use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("line {line}: {message}")]
    Record { line: u64, message: String },

    #[error("duplicate document id {id:?} on lines {first} and {second}")]
    DuplicateId { id: String, first: u64, second: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("stratum {stratum} has {size} documents, fewer than the {requested} requested")]
    StratumTooSmall {
        stratum: String,
        size: usize,
        requested: usize,
    },

    #[error("lexicon {lexicon}, line {line}: {message}")]
    Lexicon {
        lexicon: String,
        line: u64,
        message: String,
    },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Broad failure class, used for process exit codes and C error codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. } => ErrorKind::Io,
            Error::Config { .. } => ErrorKind::Config,
            Error::Schema(_)
            | Error::Record { .. }
            | Error::DuplicateId { .. }
            | Error::Lexicon { .. }
            | Error::Csv(_)
            | Error::Json(_) => ErrorKind::Data,
            Error::InvalidInput(_) | Error::StratumTooSmall { .. } => ErrorKind::Analysis,
            Error::Stage { source, .. } => source.kind(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Analysis,
    Io,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Analysis => 4,
            ErrorKind::Io => 5,
        }
    }
}
