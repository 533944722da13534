use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed PACS code {raw:?}: {reason}")]
    MalformedCode { raw: String, reason: &'static str },

    #[error("set distance is undefined for an empty set")]
    EmptySet,

    #[error("recursive diversity is limited to {max} codes, got {len}")]
    SetTooLarge { len: usize, max: usize },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("line {line}: duplicate DOI {doi:?}")]
    DuplicateDoi { line: usize, doi: String },

    #[error("invalid year range {0:?}")]
    InvalidYearRange(String),

    #[error("no papers published in {0}")]
    EmptyPeriod(String),

    #[error("no papers published in cohort {0}")]
    EmptyCohort(String),

    #[error("author {0:?} has no papers in the corpus")]
    UnknownAuthor(String),

    #[error("windows {0} and {1} overlap or are out of order")]
    OverlappingWindows(String, String),

    #[error("invalid group scheme: {0}")]
    InvalidScheme(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
