use thiserror::Error;

/// Errors surfaced by index construction, parsing and persistence.
#[derive(Debug, Error)]
pub enum Error {
    #[error("text is empty")]
    EmptyText,

    #[error("pattern is empty")]
    EmptyPattern,

    #[error("position {position} is outside 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },

    #[error("ancestor distance {distance} exceeds node depth {depth}")]
    AncestorOutOfRange { distance: usize, depth: usize },

    #[error("malformed FP encoding: position {position} needs {needed} unmarked nodes, {available} available")]
    MalformedFp {
        position: usize,
        needed: usize,
        available: usize,
    },

    #[error("trie line {line}: {message}")]
    TrieSyntax { line: usize, message: String },

    #[error("trie: {0}")]
    TrieShape(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),

    #[error("invalid index file: {0}")]
    InvalidIndex(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
