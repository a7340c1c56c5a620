use thiserror::Error;

/// Failure of a CLI command; each variant maps to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("output error: {0}")]
    Output(String),
    #[error("numerical failure in {module}: {source}")]
    Numerical {
        module: &'static str,
        source: priorkryl::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) | Self::Input(_) | Self::Output(_) => 2,
            Self::Numerical { .. } => 3,
        }
    }
}

/// Maps a library error raised in `module`; file problems count as input errors.
pub(crate) fn lib_err(module: &'static str) -> impl FnOnce(priorkryl::Error) -> CliError {
    move |e| match e {
        priorkryl::Error::Io(m) | priorkryl::Error::Pgm(m) => CliError::Input(m),
        source => CliError::Numerical { module, source },
    }
}

pub(crate) fn out_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Output(format!("{}: {e}", path.display()))
}
