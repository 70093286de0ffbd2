//! Error type shared by the library and the CLI.

/// Errors are split by how the CLI reports them: configuration and input-data
/// problems exit with code 2, physics-domain violations (quantum numbers out
/// of range, forbidden channel setups) with code 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error("physics domain error: {0}")]
    Physics(String),

    #[error("data error: {0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn physics(message: impl Into<String>) -> Self {
        Error::Physics(message.into())
    }

    pub fn data(message: impl Into<String>) -> Self {
        Error::Data(message.into())
    }

    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Physics(_) => 3,
            _ => 2,
        }
    }
}
