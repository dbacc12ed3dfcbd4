use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown tile id {0}")]
    UnknownTile(usize),
    #[error("edge label arity mismatch ({0} vs {1} layers)")]
    Arity(usize, usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("analysis error at ({x}, {y}): {msg}")]
    Analysis { x: i64, y: i64, msg: String },
    #[error("compile error: {0}")]
    Compile(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
