//! Harness errors, split by exit code: configuration problems exit with 3,
//! solver/runtime failures with 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),

    #[error("run error: {0}")]
    Run(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 3,
            BenchError::Run(_) | BenchError::Io(_) => 2,
        }
    }
}

impl From<sgp_imaging::ImagingError> for BenchError {
    fn from(e: sgp_imaging::ImagingError) -> Self {
        BenchError::Run(e.to_string())
    }
}

impl From<sgp_core::CoreError> for BenchError {
    fn from(e: sgp_core::CoreError) -> Self {
        BenchError::Run(e.to_string())
    }
}

pub(crate) fn config_error(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}

pub(crate) fn run_error(msg: impl Into<String>) -> BenchError {
    BenchError::Run(msg.into())
}
