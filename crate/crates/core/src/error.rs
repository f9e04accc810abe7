use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: invalid input (`Validation`, `Material`,
/// `Stack`, `Config`, `Io`) and numerical failures (`Integration`,
/// `Truncation`, `Oracle`). The CLI maps them to exit codes 1 and 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("material `{name}`: {message}")]
    Material { name: String, message: String },

    #[error("stack: {0}")]
    Stack(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("integration did not converge: {0}")]
    Integration(String),

    #[error("sum truncation failed: {0}")]
    Truncation(String),

    #[error("oracle invalid: {0}")]
    Oracle(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn material(name: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Material { name: name.into(), message: message.into() }
    }

    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Integration(_) | Error::Truncation(_) | Error::Oracle(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
