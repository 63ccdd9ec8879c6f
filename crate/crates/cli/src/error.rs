use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] mmpatch::Error),
}

impl CliError {
    /// 1 for I/O and config problems, 3 for solver non-convergence, 2 for
    /// every other model failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Config(_) => 1,
            CliError::Model(mmpatch::Error::UnknownVariant(_)) => 1,
            CliError::Model(mmpatch::Error::Convergence { .. }) => 3,
            CliError::Model(_) => 2,
        }
    }
}
