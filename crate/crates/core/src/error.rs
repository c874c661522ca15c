use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("not a unit: constant term vanishes")]
    NotAUnit,
    #[error("substitution may diverge: {0}")]
    SubstitutionDivergence(String),
    #[error("series is not regular in `{0}` to the certification order")]
    NotRegular(String),
    #[error("no regular direction found within a budget of {budget} candidates")]
    NoRegularDirection { budget: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("inconclusive at order {order}: {what}")]
    Inconclusive { order: u32, what: String },
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("lemma violation: {0}")]
    LemmaViolation(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariableAt { name: String, line: usize, column: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::UnknownVariable(_) | Error::UnknownVariableAt { .. } | Error::Context(_) => 1,
            Error::Inconclusive { .. } => 3,
            Error::Internal(_) | Error::LemmaViolation(_) => 4,
            _ => 2,
        }
    }
}
