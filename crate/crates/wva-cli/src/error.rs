//! CLI error type mapping failures onto the documented exit codes.

use std::fmt;

use wva_core::CoreError;

pub type Result<T> = std::result::Result<T, CliError>;

/// Anything that ends a run early. Each variant owns one exit code so
/// callers can script against the process status:
///
/// * 2: the configuration is invalid or a file could not be read/written
/// * 3: the configured operating point violates the weak-coupling regime
/// * 4: a numerical routine failed (singular post-selection, diverged fit)
///   or an invariant check measured a violation
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Regime(String),
    Numerical(CoreError),
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn config(message: String) -> Self {
        CliError::Config(message)
    }

    pub fn regime(message: String) -> Self {
        CliError::Regime(message)
    }

    pub fn invariant(message: String) -> Self {
        CliError::Invariant(message)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Regime(_) => 3,
            CliError::Numerical(_) | CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Regime(msg) => write!(f, "regime violation: {msg}"),
            CliError::Numerical(err) => write!(f, "numerical error: {err}"),
            CliError::Invariant(msg) => write!(f, "invariant violation: {msg}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Numerical(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}
