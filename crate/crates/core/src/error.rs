use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input object violates one of its invariants.
    #[error("validation error: {0}")]
    Validation(String),

    /// Pieces of a configuration are individually valid but do not fit together.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// The request is valid but too expensive (or unsupported) to carry out.
    #[error("refused: {0}")]
    Refusal(String),

    #[error(
        "pulse table carries {total_mean_photons:.4} mean photons per trial (must be < 1); \
         try input_energy <= {suggested_input_energy:.6}"
    )]
    Scaling {
        total_mean_photons: f64,
        suggested_input_energy: f64,
    },

    #[error("dead-time saturation at bin {bin}: no surviving trials left")]
    Saturation { bin: usize },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn io_path(action: &str, path: &std::path::Path, source: std::io::Error) -> Self {
        Error::io(
            format!("{action} {}", PathBuf::from(path).display()),
            source,
        )
    }

    /// Process exit code: 1 for bad input, 2 for failures at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Validation(_)
            | Error::Configuration(_)
            | Error::Refusal(_)
            | Error::Scaling { .. }
            | Error::Parse { .. } => 1,
            Error::Saturation { .. }
            | Error::Estimation(_)
            | Error::Alignment(_)
            | Error::Io { .. } => 2,
        }
    }
}
