use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient space unstable: (g, n) = ({g}, {n})")]
    UnstableSpace { g: u32, n: u32 },
    #[error("invalid stable graph: {0}")]
    InvalidGraph(String),
    #[error("symbol {symbol} invalid on (g, n) = ({g}, {n}): {reason}")]
    InvalidSymbol {
        symbol: String,
        g: u32,
        n: u32,
        reason: String,
    },
    #[error("ambient space mismatch: ({0}, {1}) vs ({2}, {3})")]
    SpaceMismatch(u32, u32, u32, u32),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("inconsistent multiplicity system: {0}")]
    Inconsistent(String),
    #[error("unknown check name: {0}")]
    UnknownCheck(String),
    #[error("unknown divisor name: {0}")]
    UnknownDivisor(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
