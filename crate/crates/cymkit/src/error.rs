use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("sample {index}: {reason}")]
    Sample { index: usize, reason: String },

    #[error("metric not positive definite at sample {index} (smallest eigenvalue {value:e})")]
    Degenerate { index: usize, value: f64 },

    #[error("geometry mismatch: {0}")]
    Geometry(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// True for errors caused by the caller's data rather than by a solve.
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Geometry(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
