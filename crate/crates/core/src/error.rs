use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed poset: {0}")]
    Malformed(String),

    #[error("rank {rank} out of range (top rank is {top})")]
    RankOutOfRange { rank: usize, top: usize },

    #[error("input is not {r}-differential up to its top rank: {detail}")]
    NotDifferential { r: u32, detail: String },

    #[error("hypergraph is not admissible: {0}")]
    Inadmissible(String),

    #[error("unsupported field order {0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedOrder(u32),

    #[error("vertex count {r} exceeds the enumeration limit {limit}")]
    LimitExceeded { r: u32, limit: u32 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
