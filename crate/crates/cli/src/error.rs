use thiserror::Error;

/// Failure of a CLI run, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Cap(_) => 4,
        }
    }
}

impl From<cbr_core::Error> for CliError {
    fn from(e: cbr_core::Error) -> Self {
        use cbr_core::Error as E;
        match e {
            E::CapExceeded { .. } => CliError::Cap(e.to_string()),
            E::InvalidArgument(_) | E::InvalidConfig(_) => CliError::Usage(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
