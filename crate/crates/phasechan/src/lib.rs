//! IO companion to `phasechan-core`: validation oracles, parameter scans,
//! figure-grid reproduction, CSV/JSON emission and the `phasechan` CLI.

pub use phasechan_core::*;

pub mod config;
pub mod figure;
pub mod oracle;
pub mod output;
pub mod scan;

/// Errors from the IO layer, with process exit codes attached:
/// 2 usage/config, 3 numerical, 4 IO.
#[derive(thiserror::Error, Debug)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] phasechan_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) | AppError::Config(_) => 2,
            AppError::Core(phasechan_core::Error::Domain(_)) => 2,
            AppError::Core(_) => 3,
            AppError::Io(_) | AppError::Csv(_) | AppError::Json(_) => 4,
        }
    }
}
