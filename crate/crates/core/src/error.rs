use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    /// Work budget exhausted. `partial` holds whatever was computed so far,
    /// serialized as JSON.
    #[error("budget exceeded: {msg}")]
    Budget { msg: String, partial: Option<serde_json::Value> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget { msg: msg.into(), partial: None }
    }
}
