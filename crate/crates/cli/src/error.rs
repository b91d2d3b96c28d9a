use std::process::ExitCode;

use qkr_core::QkrError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical guard: {0}")]
    Numerical(QkrError),
    #[error("{0}")]
    Simulation(QkrError),
    #[error("verification failed: {0} check(s) did not pass")]
    Verification(usize),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<QkrError> for CliError {
    fn from(e: QkrError) -> Self {
        match e {
            QkrError::Argument(msg) | QkrError::Domain(msg) => CliError::Usage(msg),
            e if e.is_numerical_guard() => CliError::Numerical(e),
            e @ QkrError::Analysis(_) => CliError::Numerical(e),
            e => CliError::Simulation(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Simulation(_) | CliError::Io(_) => 1,
        })
    }
}
