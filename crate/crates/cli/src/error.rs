use std::path::PathBuf;

use pacsdiv_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("config: {0}")]
    Config(String),

    #[error("writing {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("writing json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit codes, one per error class. Clap reports usage errors with 2.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const INPUT_FORMAT: i32 = 4;
    pub const DUPLICATE_DOI: i32 = 5;
    pub const CONFIG: i32 = 6;
    pub const EMPTY_SELECTION: i32 = 7;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::Io { .. } => exit::IO,
                CoreError::Format { .. } | CoreError::MalformedCode { .. } => exit::INPUT_FORMAT,
                CoreError::DuplicateDoi { .. } => exit::DUPLICATE_DOI,
                CoreError::InvalidYearRange(_)
                | CoreError::InvalidScheme(_)
                | CoreError::InvalidArgument(_)
                | CoreError::OverlappingWindows(..) => exit::CONFIG,
                CoreError::EmptyPeriod(_)
                | CoreError::EmptyCohort(_)
                | CoreError::UnknownAuthor(_) => exit::EMPTY_SELECTION,
                CoreError::EmptySet | CoreError::SetTooLarge { .. } => exit::OTHER,
            },
            CliError::Config(_) => exit::CONFIG,
            CliError::Write { .. } => exit::IO,
            CliError::Csv(_) | CliError::Json(_) => exit::IO,
        }
    }
}
