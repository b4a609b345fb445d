//! Runner errors and their mapping to process exit codes.

use thiserror::Error;

/// Exit status: success, or a passing comparison.
pub const EXIT_OK: i32 = 0;
/// Exit status: domain or validation error.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status: quadrature failure.
pub const EXIT_QUADRATURE: i32 = 2;
/// Exit status: a comparison ran but did not pass.
pub const EXIT_COMPARE_FAIL: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] udw_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parameter validation failed: {0}")]
    Validation(String),

    #[error("unknown figure '{0}'")]
    UnknownFigure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Core(e) => core_exit_code(e),
            _ => EXIT_DOMAIN,
        }
    }
}

/// Quadrature failures map to 2, every other core error to 1.
pub fn core_exit_code(e: &udw_core::Error) -> i32 {
    match e {
        udw_core::Error::QuadratureFailure(_) => EXIT_QUADRATURE,
        _ => EXIT_DOMAIN,
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
