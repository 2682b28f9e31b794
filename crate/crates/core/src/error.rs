//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("ambiguous vertex `{0}`: name expands to more than one marked vertex")]
    AmbiguousVertex(String),

    #[error("words belong to different group contexts")]
    ContextMismatch,

    #[error("word `{0}` is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("element `{0}` has infinite order (its core has a regular block)")]
    InfiniteOrder(String),

    #[error("exponent matrix has rank {rank} < {expected}: witnesses violate condition (3)")]
    RankDeficient { rank: usize, expected: usize },

    #[error("graph product is infinite: marked graph is not complete")]
    InfiniteGroup,

    #[error("size limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("marked graph is empty")]
    EmptyGraph,

    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// Stable machine-readable code, used in CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "invalid-spec",
            Error::UnknownVertex(_) => "unknown-vertex",
            Error::AmbiguousVertex(_) => "ambiguous-vertex",
            Error::ContextMismatch => "context-mismatch",
            Error::NotCyclicallyReduced(_) => "not-cyclically-reduced",
            Error::InfiniteOrder(_) => "infinite-order",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::InfiniteGroup => "infinite-group",
            Error::LimitExceeded(_) => "limit-exceeded",
            Error::Parse { .. } => "parse-error",
            Error::EmptyGraph => "empty-graph",
            Error::Precondition(_) => "precondition",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
