use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("{list}[{index}] `{source_text}`, column {column}: {message}")]
    Expression { list: String, index: usize, source_text: String, column: usize, message: String },

    #[error("polynomials live in different variable spaces")]
    SpaceMismatch,

    #[error("ideal is not zero-dimensional over the parameter field: {0}")]
    NotZeroDimensional(String),

    #[error("specialization point lies outside the open set where the basis specializes")]
    OutsideOpenSet,

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("inconsistent Tarski queries: {0}")]
    InconsistentQueries(String),

    #[error("a leading principal minor vanished identically; draw a fresh congruence matrix")]
    ResampleNeeded,

    #[error("specialized system is positive-dimensional")]
    PositiveDimensional,

    #[error("sign at algebraic point undecided after maximal refinement")]
    NeedsExactRoot,
}

pub type Result<T> = std::result::Result<T, Error>;
