use thiserror::Error;

/// Failures of the driver, each tied to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] ntu_core::error::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use ntu_core::error::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Invalid(_) => 2,
            CliError::Core(e) => match e {
                E::Dimension(_) | E::NotSquare { .. } | E::InfiniteBound(_) | E::Precondition(_) => 2,
                E::Cap { .. } | E::Budget(_) => 3,
                E::Infeasible(_) | E::Unbounded(_) | E::Invariant(_) => 4,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
