use std::fmt;

use homport::Error;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Checks ran and at least one failed.
    Verification(usize),
    Usage(String),
    Io(String),
    NotUnitary(f64),
    OverCap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Verification(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::NotUnitary(_) => 4,
            Self::OverCap(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Verification(failed) => write!(f, "{failed} verification check(s) failed"),
            Self::Usage(msg) => write!(f, "usage error: {msg}"),
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
            Self::NotUnitary(dev) => write!(f, "matrix is not unitary: max |U†U - I| = {dev:e}"),
            Self::OverCap(msg) => write!(f, "{msg} (pass --force to override)"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotUnitary { deviation } => Self::NotUnitary(deviation),
            Error::OverCap { .. } => Self::OverCap(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}
