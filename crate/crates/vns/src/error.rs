use thiserror::Error;

/// Errors surfaced by the library. Validation failures map to exit code 2
/// in the CLI, numerical aborts to exit code 3.
#[derive(Debug, Error)]
pub enum VnsError {
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("config error{}: {msg}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, msg: String },

    #[error("numerical abort: {0}")]
    Numerical(String),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl VnsError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        VnsError::Invalid(msg.into())
    }

    pub fn config(line: Option<usize>, msg: impl Into<String>) -> Self {
        VnsError::Config { line, msg: msg.into() }
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        VnsError::Numerical(msg.into())
    }

    /// CLI exit code associated with this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            VnsError::Numerical(_) => 3,
            _ => 2,
        }
    }
}
