use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{context}: {source}")]
    Model {
        context: String,
        #[source]
        source: mtlogloss::Error,
    },
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn model(context: impl Into<String>) -> impl FnOnce(mtlogloss::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Model { context, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Model { source, .. } => match source {
                mtlogloss::Error::NonConvergence { .. } => "NonConvergence",
                mtlogloss::Error::EnumerationTooLarge { .. } | mtlogloss::Error::GridTooLarge { .. } => "ResourceLimit",
                _ => "ValidationError",
            },
            CliError::UnknownCommand(_) => "UnknownCommand",
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind() {
            "NonConvergence" | "ResourceLimit" => EXIT_RUNTIME,
            "IoError" => EXIT_IO,
            _ => EXIT_VALIDATION,
        }
    }

    /// One-line JSON description for stderr.
    pub fn record(&self) -> Value {
        let mut rec = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Parse { path, line, column, .. } = self {
            rec["path"] = json!(path.display().to_string());
            rec["line"] = json!(line);
            rec["column"] = json!(column);
        }
        rec
    }
}
