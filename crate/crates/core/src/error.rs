use thiserror::Error;

/// Errors produced by graph construction, solving, oracles and file IO.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AemfpError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("invalid deviation function: {0}")]
    InvalidDeviation(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("no flow satisfies the lower bounds")]
    Infeasible,
    #[error("enumeration budget exceeded: {needed} candidates > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("unsupported deviation: {0}")]
    UnsupportedDeviation(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl AemfpError {
    /// Short machine-readable tag used on the CLI's stderr line.
    pub fn kind(&self) -> &'static str {
        match self {
            AemfpError::InvalidGraph(_) => "invalid_graph",
            AemfpError::InvalidInstance(_) => "invalid_instance",
            AemfpError::InvalidBounds(_) => "invalid_bounds",
            AemfpError::InvalidDeviation(_) => "invalid_deviation",
            AemfpError::OutOfRange(_) => "out_of_range",
            AemfpError::Infeasible => "infeasible",
            AemfpError::BudgetExceeded { .. } => "budget_exceeded",
            AemfpError::UnsupportedDeviation(_) => "unsupported_deviation",
            AemfpError::Parse { .. } => "parse",
            AemfpError::Internal(_) => "internal",
        }
    }
}

pub type Result<T, E = AemfpError> = std::result::Result<T, E>;
