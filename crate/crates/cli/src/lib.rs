//! Batch harness behind the `gpsofic` binary: versioned TOML configs, seeded
//! runs of the library experiments, atomic CSV output and a run manifest.
#![forbid(unsafe_code)]

pub mod commands;
pub mod config;
pub mod files;
pub mod output;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{run, validate_path, Kind, RunArgs};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "GPSOFIC_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    /// Exit status 2.
    #[error("config error at `{path}`: {message}")]
    Schema { path: String, message: String },
    /// Exit status 3.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl ToString) -> CliError {
        CliError::Schema {
            path: path.into(),
            message: message.to_string(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } => 2,
            CliError::Resource(_) => 3,
            _ => 1,
        }
    }
}

impl From<gpsofic_permmodel::PermError> for CliError {
    fn from(e: gpsofic_permmodel::PermError) -> Self {
        use gpsofic_permmodel::PermError;
        match e {
            PermError::Resource(m) => CliError::Resource(m),
            PermError::Alg(a) => a.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<gpsofic_algnum::AlgError> for CliError {
    fn from(e: gpsofic_algnum::AlgError) -> Self {
        match e {
            gpsofic_algnum::AlgError::Resource(m) => CliError::Resource(m),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<gpsofic_traffic::TrafficError> for CliError {
    fn from(e: gpsofic_traffic::TrafficError) -> Self {
        match e {
            gpsofic_traffic::TrafficError::Resource(m) => CliError::Resource(m),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<gpsofic_freeprob::ProbError> for CliError {
    fn from(e: gpsofic_freeprob::ProbError) -> Self {
        match e {
            gpsofic_freeprob::ProbError::Alg(a) => a.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<gpsofic_digraphs::GraphError> for CliError {
    fn from(e: gpsofic_digraphs::GraphError) -> Self {
        CliError::Failed(e.to_string())
    }
}
