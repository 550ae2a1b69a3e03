use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or inconsistent settings, detected before any work starts.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot parse {path}: {source}")]
    ConfigFile {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A sweep point failed after the run had started.
    #[error("point U = {u}: {source}")]
    Point {
        u: f64,
        #[source]
        source: wigner_core::Error,
    },

    #[error(transparent)]
    Core(#[from] wigner_core::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 2 for configuration problems, 4 for I/O, 1 for
    /// anything that went wrong mid-run. Non-convergence (3) is not an error
    /// and is decided by the caller.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::ConfigFile { .. } => 2,
            CliError::Io { .. } => 4,
            CliError::Point { .. } | CliError::Core(_) | CliError::Json(_) => 1,
        }
    }
}
