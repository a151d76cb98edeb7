use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("edge {edge} out of range for graph with {m} edges")]
    InvalidEdge { edge: usize, m: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("graph must be connected: {0}")]
    Disconnected(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("graph is not planar")]
    NonPlanar,
    /// An engine refused an instance that exceeds its configured capacity.
    #[error("engine limit exceeded: {0}")]
    Limit(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
