use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),
    #[error("unknown automaton `{0}`")]
    UnknownAutomaton(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("empty domain")]
    EmptyDomain,
    #[error("counter overflow")]
    CounterOverflow,
    #[error("enumeration of {count} ground sequences exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
