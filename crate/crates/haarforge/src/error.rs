use thiserror::Error;

/// Crate-wide error type. The CLI maps these onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("numerical failure (dim {dim}): {msg}")]
    Numerical { dim: usize, msg: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unsupported range: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn numerical(dim: usize, msg: impl Into<String>) -> Self {
        Error::Numerical {
            dim,
            msg: msg.into(),
        }
    }

    /// Process exit code: 1 for bad input, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::InvalidConfig(_) | Error::Unsupported(_) => 1,
            Error::Json(_) => 1,
            Error::Numerical { .. } | Error::Infeasible(_) | Error::Io(_) => 2,
        }
    }

    /// Short machine-readable kind tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Numerical { .. } => "numerical_failure",
            Error::Infeasible(_) => "infeasible",
            Error::Unsupported(_) => "unsupported_range",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
