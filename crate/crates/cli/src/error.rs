use serde::Serialize;
use serde_json::json;

use mslab_core::Error as CoreError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Io,
    Validation,
    Precision,
    Resource,
    Integrity,
    /// A verifier ran to completion and the property did not hold.
    VerificationFailed,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Io | ErrorKind::Integrity => 1,
            ErrorKind::Validation => 2,
            ErrorKind::Precision => 3,
            ErrorKind::Resource => 4,
            ErrorKind::VerificationFailed => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub partial: Option<f64>,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
            partial: None,
        }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Validation, message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    /// The machine-readable object written to stderr.
    pub fn to_json(&self) -> String {
        let mut obj = json!({
            "error": {
                "kind": self.kind,
                "exit_code": self.exit_code(),
                "message": self.message,
            }
        });
        if let Some(p) = self.partial {
            obj["error"]["partial"] = json!(p);
        }
        obj.to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let message = e.to_string();
        let (kind, partial) = match e {
            CoreError::InvalidInput(_)
            | CoreError::Domain(_)
            | CoreError::Pole(_)
            | CoreError::Unsupported(_) => (ErrorKind::Validation, None),
            CoreError::Range(_) | CoreError::Resource(_) | CoreError::Overflow(_) => {
                (ErrorKind::Resource, None)
            }
            CoreError::Precision { partial, .. } => (ErrorKind::Precision, partial),
            CoreError::Integrity(_) => (ErrorKind::Integrity, None),
            CoreError::Io(_) => (ErrorKind::Io, None),
        };
        CliError {
            kind,
            message,
            partial,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ErrorKind::Io, e.to_string())
    }
}
