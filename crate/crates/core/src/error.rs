use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("singular value iteration did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's input rather than an internal failure.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::InvalidParameters(_)
                | Error::InvalidState(_)
                | Error::SizeLimit(_)
                | Error::Parse(_)
                | Error::Io { .. }
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn user_errors_versus_internal_failures() {
        assert!(Error::InvalidInput("x".into()).is_user_error());
        assert!(Error::SizeLimit("x".into()).is_user_error());
        assert!(Error::Parse("x".into()).is_user_error());
        assert!(!Error::DegenerateInput("x".into()).is_user_error());
        assert!(!Error::DegenerateSpectrum("x".into()).is_user_error());
        assert!(!Error::ConvergenceFailure {
            iterations: 1,
            residual: 1.0
        }
        .is_user_error());
    }
}
