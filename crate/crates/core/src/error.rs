use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    InvalidType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("weight set exceeds cap of {0}")]
    TooLarge(usize),
    #[error("character is not Weyl invariant: {0}")]
    NotWeylInvariant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown: {0}")]
    Unknown(String),
    #[error("not covered: {0}")]
    NotCovered(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Unknown and not-covered results are distinct from domain errors.
    pub fn is_gap(&self) -> bool {
        matches!(self, Error::Unknown(_) | Error::NotCovered(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
