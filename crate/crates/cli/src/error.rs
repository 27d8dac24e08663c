use std::fmt;
use std::process::ExitCode;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or parameter values.
    Usage(String),
    /// A numerical check on the produced result failed.
    Verification(String),
    Io(String),
    /// A solver failed on valid input.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
            CliError::Internal(_) => 1,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<transship::Error> for CliError {
    fn from(e: transship::Error) -> Self {
        use transship::Error as E;
        match e {
            E::Io { .. } | E::Parse { .. } => CliError::Io(e.to_string()),
            E::Domain { .. } | E::TooLarge { .. } | E::InvalidStructure { .. } => CliError::Usage(e.to_string()),
            E::NoBracket { .. } => CliError::Internal(e.to_string()),
        }
    }
}

/// Wraps an I/O failure on `path`.
pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
