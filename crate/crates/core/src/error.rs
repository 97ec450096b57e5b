use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Vertex, message and sender numbers carried in errors are 1-based, matching
/// the instance file format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed instance document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("{path}: receiver {receiver} wants its own message")]
    SelfWant { path: String, receiver: usize },

    #[error("{path}: index {index} outside 1..={max}")]
    OutOfRange {
        path: String,
        index: usize,
        max: usize,
    },

    #[error("{path}: sender owns no messages")]
    EmptySender { path: String },

    #[error("message {0} is not owned by any sender")]
    Unowned(usize),

    #[error("instance must be simplified before building graphs")]
    NotSimplified,

    #[error("vertex set {0:?} is not a leaf SCC")]
    NotLeafScc(Vec<usize>),

    #[error("leaf SCC {0:?} is not semi message-connected")]
    NotSemi(Vec<usize>),

    #[error("leaf SCC {0:?} is not message-disconnected")]
    NotMessageDisconnected(Vec<usize>),

    #[error("leaf SCC {0:?} is already message-connected")]
    AlreadyConnected(Vec<usize>),

    #[error("vertex {vertex} does not belong to {scc:?}")]
    VertexNotInScc { vertex: usize, scc: Vec<usize> },

    #[error("degeneracy witness no longer holds for {0:?}")]
    StaleWitness(Vec<usize>),

    #[error("lower bound bookkeeping mismatch: counters give {counted}, final state has {actual}")]
    CountMismatch { counted: usize, actual: usize },

    #[error("invalid connecting tree {vertices:?}: {reason}")]
    InvalidTree {
        vertices: Vec<usize>,
        reason: &'static str,
    },

    #[error("no sender owns all of {0:?}")]
    NoOwningSender(Vec<usize>),

    #[error("row {row} uses message {message} outside sender {sender}'s set")]
    SupportViolation {
        row: usize,
        sender: usize,
        message: usize,
    },

    #[error("code has {found} coefficients per row, instance has {expected} messages")]
    LengthMismatch { expected: usize, found: usize },

    #[error("instance too large: {what} is {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
