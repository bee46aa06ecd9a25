use std::fmt::Display;
use std::path::Path;

use serde::Serialize;

/// Everything a subcommand can fail with, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flag value; exit code 2.
    Usage { flag: String, message: String },
    /// Error raised by the library; exit code 1.
    Domain(mylab::Error),
    /// Unreadable or malformed input file; exit code 1.
    Input { kind: &'static str, path: String, message: String },
}

impl CliError {
    pub fn usage(flag: &str, message: impl Display) -> Self {
        CliError::Usage { flag: flag.to_string(), message: message.to_string() }
    }

    pub fn io(path: &Path, message: impl Display) -> Self {
        CliError::Input { kind: "Io", path: path.display().to_string(), message: message.to_string() }
    }

    pub fn parse(path: &Path, message: impl Display) -> Self {
        CliError::Input { kind: "Parse", path: path.display().to_string(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } => 2,
            _ => 1,
        }
    }

    /// The JSON document written to stderr.
    pub fn to_json(&self) -> ErrorJson {
        let (kind, message, flag, path) = match self {
            CliError::Usage { flag, message } => ("Usage", message.clone(), Some(flag.clone()), None),
            CliError::Domain(e) => (e.kind(), e.to_string(), None, None),
            CliError::Input { kind, path, message } => (*kind, message.clone(), None, Some(path.clone())),
        };
        ErrorJson { error: ErrorBody { kind: kind.to_string(), message, flag, path } }
    }
}

impl From<mylab::Error> for CliError {
    fn from(e: mylab::Error) -> Self {
        CliError::Domain(e)
    }
}

#[derive(Serialize)]
pub struct ErrorJson {
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}
