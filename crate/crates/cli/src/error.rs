use serde::Serialize;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] roofs_core::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed {0}")]
    Spec(String),
    #[error("unknown check `{name}`; available: {available}")]
    UnknownCheck { name: String, available: String },
    #[error("{0}")]
    Usage(String),
}

/// Machine-readable form written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorJson {
    pub error: &'static str,
    pub message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(_) => "computation",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
            CliError::Csv(_) => "csv",
            CliError::Spec(_) => "spec",
            CliError::UnknownCheck { .. } => "unknown_check",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> ErrorJson {
        ErrorJson {
            error: self.kind(),
            message: self.to_string(),
        }
    }
}
