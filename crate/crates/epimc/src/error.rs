use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("empty agent group under D")]
    EmptyGroup,

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("unknown world `{0}`")]
    UnknownWorld(String),

    #[error("unsupported fragment: {0}")]
    UnsupportedFragment(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("announcement would leave an empty domain")]
    EmptyDomain,

    #[error("worlds `{0}` and `{1}` are collectively bisimilar; no distinguishing formula exists")]
    NoDistinguisher(String, String),

    #[error("world set is not closed under collective bisimilarity")]
    NotBisimClosed,

    #[error("malformed QBF instance: {0}")]
    BadQbf(String),
}

pub type Result<T> = std::result::Result<T, Error>;
