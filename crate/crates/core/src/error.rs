use thiserror::Error;

/// Errors produced by the toolkit.
///
/// The variants map onto the process exit codes used by the command line:
/// configuration and usage problems exit with 1, data and coverage problems
/// with 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn coverage(msg: impl Into<String>) -> Self {
        Error::Coverage(msg.into())
    }

    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Usage(_) | Error::Parse { .. } => 1,
            Error::Domain(_) | Error::Coverage(_) | Error::Csv(_) | Error::Io(_) => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
