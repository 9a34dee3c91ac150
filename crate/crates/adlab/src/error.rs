use std::fmt;

/// Errors surfaced by the command-line layer. Domain errors keep their
/// stable short name for the diagnostic stream; usage errors map to exit 2.
#[derive(Debug)]
pub enum CliError {
    Io(std::io::Error),
    Format(String),
    Core(adlab_core::Error),
    Usage(String),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Io(_) => "IoError",
            CliError::Format(_) => "FormatError",
            CliError::Core(e) => e.name(),
            CliError::Usage(_) => "UsageError",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Format(msg) => write!(f, "format error: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<adlab_core::Error> for CliError {
    fn from(e: adlab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
