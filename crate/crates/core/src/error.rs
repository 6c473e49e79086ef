use thiserror::Error;

/// Errors raised by family construction and the analysis operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("symbol {symbol} out of range 1..={maps}")]
    SymbolOutOfRange { symbol: usize, maps: usize },

    #[error("empty word")]
    EmptyWord,

    #[error("parameter {param} outside the family interval [{lo}, {hi}]")]
    ParameterOutOfRange {
        param: String,
        lo: String,
        hi: String,
    },

    #[error("degenerate contraction ratio {ratio} for map {map}")]
    DegenerateRatio { map: usize, ratio: String },

    #[error("operation requires a homogeneous family (all ratios 1/L)")]
    NotHomogeneous,

    #[error("base L = {0} is below 3; the non-degeneracy rank test needs ratio in (0, 1/2)")]
    BaseTooSmall(u64),

    #[error("budget exceeded at depth {depth}: {reason}; feasible depth is {feasible}")]
    BudgetExceeded {
        depth: usize,
        feasible: usize,
        reason: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("empty measure")]
    EmptyMeasure,

    #[error("empty interval")]
    EmptyInterval,

    #[error("{0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
