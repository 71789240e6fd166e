use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] gfrac::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    /// 2 for bad input or a domain problem, 3 for non-convergence. Failed checks are not errors.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Lib(e) if e.is_convergence() => 3,
            _ => 2,
        })
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
