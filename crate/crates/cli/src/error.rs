use std::path::PathBuf;

use thiserror::Error;

/// Exit status for bad flags or out-of-range parameters.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for unreadable or malformed input data.
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{path}: no samples")]
    EmptyTrace { path: PathBuf },
    #[error("{0}")]
    Core(#[from] hil_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use hil_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(
                E::InvalidOffloadCost { .. }
                | E::InvalidDeltaMin { .. }
                | E::InvalidLearningRate { .. }
                | E::InvalidEpsilon { .. }
                | E::InvalidTuning(_)
                | E::InvalidPlan(_),
            ) => EXIT_USAGE,
            _ => EXIT_DATA,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
