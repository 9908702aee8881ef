use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::corpus::SentenceRef;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse error classes surfaced to the command line as exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Input,
    StageMismatch,
    TranslationMissing,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 2,
            ErrorClass::Input => 3,
            ErrorClass::StageMismatch => 4,
            ErrorClass::TranslationMissing => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::Usage => "USAGE",
            ErrorClass::Input => "INPUT",
            ErrorClass::StageMismatch => "STAGE_MISMATCH",
            ErrorClass::TranslationMissing => "TRANSLATION_MISSING",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    #[error("duplicate sentence reference {0}")]
    DuplicateRef(SentenceRef),

    #[error("unknown sentence reference {0}")]
    UnknownRef(SentenceRef),

    #[error("duplicate candidate pair ({0}, {1})")]
    DuplicatePair(SentenceRef, SentenceRef),

    #[error("missing translation for {count} sentence(s): {}", .sample.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))]
    MissingTranslations {
        count: usize,
        sample: Vec<SentenceRef>,
    },

    #[error("translation file not found: {}", .0.display())]
    TranslationFileMissing(PathBuf),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("stage artifact {}: {msg}", .path.display())]
    StageMismatch { path: PathBuf, msg: String },

    #[error("corrupt index snapshot: {0}")]
    Snapshot(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParam(_) | Error::Config(_) => ErrorClass::Usage,
            Error::StageMismatch { .. } => ErrorClass::StageMismatch,
            Error::MissingTranslations { .. } | Error::TranslationFileMissing(_) => {
                ErrorClass::TranslationMissing
            }
            _ => ErrorClass::Input,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
