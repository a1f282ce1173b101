use thiserror::Error;

/// Errors raised by the library. Inconsistency of a system is never an
/// error; it is reported through the solver verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("invalid modulus {0}: must be an odd prime")]
    InvalidModulus(u64),
    #[error("invalid star mode: conjugate transpose requires the Gaussian rationals, got {0}")]
    InvalidStarMode(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-conformal blocks: {0}")]
    NonConformalBlocks(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("characteristic 2 fields are rejected unless the char-2 probe flag is set")]
    Char2Rejected,
    #[error("characteristic 2 is not supported by this operation")]
    Char2Unsupported,
    #[error("index {index} out of range (ell = {ell})")]
    IndexOutOfRange { index: usize, ell: usize },
    #[error("X does not solve the system")]
    NotASolution,
    #[error("S is not a valid congruence witness for this system")]
    InvalidWitness,
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: String, cap: u64 },
    #[error("the characteristic 2 probe is disabled")]
    ProbeDisabled,
    #[error("operation requires a prime field")]
    NotPrimeField,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
