use std::path::PathBuf;

use qcalc_core::QcalcError;

/// Input errors; every variant maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown scenario kind {0:?} (expected one of: {known})", known = crate::scenario::Kind::NAMES.join(", "))]
    UnknownKind(String),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] QcalcError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
