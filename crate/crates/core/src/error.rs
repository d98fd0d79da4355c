use thiserror::Error;

/// Errors produced by parsing, validation and the profile engines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdmsError {
    #[error("line {line}: cannot parse {token:?} as a number")]
    Parse { line: usize, token: String },

    #[error("line {line}: infinite values are not allowed")]
    NonFinite { line: usize },

    #[error("series has {found} values, at least {required} are required")]
    TooShort { found: usize, required: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("window length {m} is infeasible for a series of length {n} (need 3 <= m <= n/2)")]
    InfeasibleWindow { m: usize, n: usize },

    #[error("series contains {0} missing values; a complete series is required")]
    MissingValues(usize),

    #[error("series has no present values")]
    AllMissing,

    #[error("infeasible mask: {0}")]
    InfeasibleMask(String),

    #[error("brute force budget exceeded: {ops} scalar operations > {limit}")]
    BudgetExceeded { ops: u128, limit: u128 },
}

pub type Result<T, E = MdmsError> = std::result::Result<T, E>;
