use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("move not applicable: {0}")]
    Move(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    TooLarge { crossings: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
