use thiserror::Error;

/// Errors raised by the optimizer library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element {element} is already in the set")]
    ElementInSet { element: usize },

    #[error("set function is not normalized: f(empty) = {value}")]
    NotNormalized { value: f64 },

    #[error("ground set of size {size} exceeds the limit of {limit} for {what}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("workload error at {path}: {message}")]
    Workload { path: String, message: String },

    #[error("missing cost for {kind} of node {node}")]
    MissingCost { kind: &'static str, node: String },

    #[error("cannot access {path}: {message}")]
    Io { path: String, message: String },

    #[error("failed to parse JSON: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn workload(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Workload {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
