//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {v} out of range for graph of order {n}")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("loop edge ({u},{u}) is not allowed")]
    LoopEdge { u: usize },

    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph is empty")]
    EmptyGraph,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("operation undefined for a single-vertex tree")]
    SingletonTree,

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("work limit of {limit} nodes exceeded in {what}")]
    WorkLimitExceeded { what: &'static str, limit: u64 },

    #[error("no graph of the requested order range could be generated")]
    InfeasibleRange,

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
