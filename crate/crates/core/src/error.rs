use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} input bits, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("arity {arity} exceeds the truth-table limit of {limit} bits")]
    ArityOverBudget { arity: usize, limit: usize },

    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },

    #[error("no unique fixed point for past value {past}: {count} accepted output tuples")]
    FixedPoint { past: usize, count: usize },

    #[error("signature mismatch: {0}")]
    Signature(String),

    #[error("malformed process: {0}")]
    MalformedProcess(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("label `{label}` has dimension {left} on one side and {right} on the other")]
    LabelDimension { label: String, left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
