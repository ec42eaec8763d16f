use std::fmt;

use thiserror::Error;

/// Exit status for successful runs.
pub const EXIT_OK: u8 = 0;
/// Exit status when a numerical check fails or a computation errors.
pub const EXIT_CHECK: u8 = 1;
/// Exit status for invalid configuration or arguments.
pub const EXIT_CONFIG: u8 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigInvalid {
    pub source: String,
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigInvalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(
                f,
                "{}:{}: field `{}`: {}",
                self.source, l, self.field, self.message
            ),
            None => write!(
                f,
                "{}: field `{}`: {}",
                self.source, self.field, self.message
            ),
        }
    }
}

impl std::error::Error for ConfigInvalid {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigInvalid),
    #[error("unknown demo `{name}`; valid demos: {valid}")]
    UnknownDemo { name: String, valid: String },
    #[error("invalid WIGNER_LAB_THREADS value {0:?}: expected a non-negative integer")]
    Threads(String),
    #[error("check `{name}` failed: {detail}")]
    CheckFailed { name: String, detail: String },
    #[error(transparent)]
    Numeric(#[from] wigner_lab::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::UnknownDemo { .. } | CliError::Threads(_) => {
                EXIT_CONFIG
            }
            _ => EXIT_CHECK,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
