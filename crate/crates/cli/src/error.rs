use std::fmt;

use gmreslab_core::LabError;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad input files or schema mismatches (exit 2).
    Usage(String),
    /// A numerical routine failed (exit 1).
    Numerical(LabError),
    /// Filesystem trouble (exit 1).
    Io(String, std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(..) => 1,
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Io(path.display().to_string(), err)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Numerical(err) => match err.operation() {
                Some(op) => write!(f, "numerical failure in {op}: {err}"),
                None => write!(f, "numerical failure: {err}"),
            },
            CliError::Io(path, err) => write!(f, "i/o error on {path}: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<LabError> for CliError {
    fn from(err: LabError) -> Self {
        CliError::Numerical(err)
    }
}
