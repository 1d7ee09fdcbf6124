use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("time {time} is past the horizon {horizon}")]
    HorizonExceeded { time: String, horizon: String },
    #[error("level {level} asks for block {level} but only {built} blocks are built")]
    UnknownBlock { level: u32, built: usize },
    #[error("no almost-horizontal jump realises a wind from a{from} to a{to} of length {len}")]
    Infeasible { from: String, to: String, len: String },
    #[error("invalid schedule: {0}")]
    ScheduleInvalid(String),
    #[error("chain needs at least {min} intermediate points, got {got}")]
    TooShort { min: u64, got: u64 },
    #[error("{assignments} assignments exceed the configured cap {cap}")]
    CapExceeded { assignments: u128, cap: u128 },
    #[error("resource budget exhausted after {nodes} nodes")]
    ResourceBudgetExceeded { nodes: u64 },
    #[error("value does not fit the scalar type: {0}")]
    Overflow(String),
    #[error("neighbourhood {0} does not belong to this alphabet")]
    AlphabetMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid composite: {0}")]
    InvalidComposite(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
