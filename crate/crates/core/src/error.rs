use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("p puts mass on symbol {symbol} where q has none")]
    AbsoluteContinuityViolation { symbol: usize },

    #[error("unknown output symbol {0}")]
    UnknownSymbol(usize),

    #[error("cannot merge symbol {0} with itself")]
    SelfMerge(usize),

    #[error("disclosure floor {requested} bits exceeds H(X) = {max} bits")]
    InfeasibleDisclosure { requested: f64, max: f64 },

    #[error("retention floor {requested} bits exceeds I(S;X) = {max} bits")]
    InfeasibleRetention { requested: f64, max: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cost function has no exact minimizer")]
    UndefinedMinimizer,

    #[error("cost function is unbounded; the mutual-information bound does not apply")]
    UnboundedCost,

    #[error("information quantity must be expressed in nats")]
    UnitsError,

    #[error("alphabet size {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("no usable rows left after filtering ({dropped} dropped)")]
    EmptyAfterFiltering { dropped: usize },

    #[error("line {line}: {reason}")]
    UnparsableRow { line: u64, reason: String },

    #[error("{path}: line {line}: {reason}")]
    Format {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("schema file: {0}")]
    Toml(#[from] toml::de::Error),
}
