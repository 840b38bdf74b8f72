use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The enclosure at the current working precision cannot decide the
    /// requested quantity. Callers refine and retry.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// Adaptive refinement reached the precision cap without a decision.
    #[error("precision cap of {cap} bits exceeded while computing {what}")]
    PrecisionCapExceeded { cap: u32, what: String },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("unknown constant `{0}`")]
    UnknownConstant(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Every convergent tried produced a nonpositive epsilon.
    #[error("degenerate reduction instance: epsilon <= 0 for convergents {tried:?}")]
    Degenerate { tried: Vec<usize> },

    /// The second reduction sweep hit gaps that must go through the Legendre path.
    #[error("degenerate gaps {0:?} require the Legendre-criterion path")]
    DegenerateGaps(Vec<u32>),

    #[error("fixed-point iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn insufficient(what: impl Into<String>) -> Self {
        Error::InsufficientPrecision(what.into())
    }
}
