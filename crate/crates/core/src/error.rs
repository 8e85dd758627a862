use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evaluation budget exhausted")]
    BudgetExhausted,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("trace append rejected: fitness {new} does not improve on {last}")]
    NonImproving { last: f64, new: f64 },

    #[error("unitation {u} out of range for order {k}")]
    UnitationOutOfRange { u: usize, k: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty population")]
    EmptyPopulation,

    #[error("genotypes are identical; no modification exists")]
    IdenticalGenotypes,

    #[error("index {index} out of range (length {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("trace too short: {0} entries")]
    TraceTooShort(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
