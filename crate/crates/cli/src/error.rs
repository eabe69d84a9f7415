use std::fmt;

/// Command failure, mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or unreadable input (exit 2).
    Input(anyhow::Error),
    /// Valid input that the geometry rejects (exit 3).
    Domain(anyhow::Error),
    /// Anything else, e.g. failing to write an output (exit 1).
    Io(anyhow::Error),
}

impl CliError {
    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(anyhow::anyhow!("{msg}"))
    }

    pub fn domain(msg: impl fmt::Display) -> Self {
        CliError::Domain(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, e) = match self {
            CliError::Input(e) => ("input error", e),
            CliError::Domain(e) => ("domain error", e),
            CliError::Io(e) => ("error", e),
        };
        write!(f, "{kind}: {e:#}")
    }
}

impl From<fagc::FagcError> for CliError {
    fn from(e: fagc::FagcError) -> Self {
        match e.root() {
            fagc::FagcError::InvalidConfig(_) => CliError::Input(e.into()),
            _ => CliError::Domain(e.into()),
        }
    }
}
