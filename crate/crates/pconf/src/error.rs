use std::fmt;

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum RunError {
    /// Bad or missing flag values (exit 2).
    Usage(String),
    /// A numerical routine failed (exit 3); domain errors count as usage.
    Numeric(pconf_core::Error),
    /// Some verification check failed (exit 1).
    Verification(Vec<String>),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Verification(_) => 1,
            RunError::Usage(_) | RunError::Io(_) => 2,
            RunError::Numeric(pconf_core::Error::Domain { .. }) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(s) => write!(f, "usage: {s}"),
            RunError::Numeric(e) => write!(f, "{e}"),
            RunError::Verification(names) => write!(f, "verification failed: {}", names.join(", ")),
            RunError::Io(e) => write!(f, "cannot write output: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<pconf_core::Error> for RunError {
    fn from(e: pconf_core::Error) -> Self {
        RunError::Numeric(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

pub type Result<T, E = RunError> = std::result::Result<T, E>;
