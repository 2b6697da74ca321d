use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(u64),
    #[error("operation needs a nonempty set")]
    EmptySet,
    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),
    #[error("invalid connection set: {0}")]
    InvalidConnectionSet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("not a cover: difference set meets <{0}> nontrivially")]
    NotACover(u64),
    #[error("not periodic under <{0}>")]
    NotPeriodic(u64),
    #[error("outside the formula's hypothesis: {0}")]
    OutOfHypothesis(String),
    #[error("budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
