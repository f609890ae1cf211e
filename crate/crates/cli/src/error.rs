use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(esdu_core::Error),
    #[error("{failed} of {total} checks failed")]
    Verification { failed: usize, total: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<esdu_core::Error> for CliError {
    fn from(e: esdu_core::Error) -> Self {
        use esdu_core::Error as E;
        match e {
            E::Domain(m) | E::InvalidChannel(m) | E::InvalidInput(m) => CliError::Usage(m),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) | CliError::Io(_) => 2,
            CliError::Verification { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
