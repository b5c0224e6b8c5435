use std::fmt;

use hypsym::Error;

/// Failures that end a run before a report is produced.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::StepSizeTooCoarse { .. } | Error::NonConvergence { .. } => 3,
                Error::NotHyperbolic { .. } | Error::RootsNotSeparated { .. } => 2,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
