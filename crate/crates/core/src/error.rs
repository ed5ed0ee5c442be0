use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Parameters outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula degenerates (for example `log(1/q)` with `q = 1`).
    #[error("degenerate: {0}")]
    Degenerate(String),

    /// A hard resource cap was hit. Never silently approximated.
    #[error("resource limit exceeded: {what} ({actual} > {limit})")]
    Resource {
        what: &'static str,
        limit: u64,
        actual: u64,
    },

    /// Search gave up because its node budget ran out.
    #[error("search budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for errors that stem from running out of a resource (edge caps,
    /// enumeration caps, search budgets).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. } | Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
