use thiserror::Error;

/// Errors raised by construction, validation and the capped exact searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: usize, vertex: usize },
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("{what} has {size} items, above the configured cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not a prime in 2..=2^31")]
    BadModulus(u64),
    #[error("{0} is not an element of the field")]
    NotInField(String),
    #[error("{0} is not in the additive subgroup generated by 1")]
    NotInUnitSubgroup(String),
    #[error("invalid sign override: {0}")]
    BadSign(String),
    #[error("invalid list at vertex {vertex}: {reason}")]
    InvalidList { vertex: usize, reason: String },
    #[error("invalid matching on edge {edge}: {reason}")]
    InvalidMatching { edge: usize, reason: String },
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("invalid renaming at vertex {vertex}: {reason}")]
    InvalidRenaming { vertex: usize, reason: String },
    #[error("edge {0} has no positive integer factorization of its sign function")]
    NoFactorization(usize),
    #[error("invalid sign data: {0}")]
    InvalidSignData(String),
    #[error("zero multiplier on edge {0}")]
    ZeroWeight(usize),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
