use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("factorization bound exceeded: {value} has no prime factor below {bound} and is not provably prime")]
    FactorBoundExceeded { value: String, bound: u64 },
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("not a prime: {0}")]
    NotPrime(String),
    #[error("degenerate twist parameter: {0}")]
    Degenerate(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("embedding problem unsolvable: {0}")]
    Unsolvable(String),
    #[error("solver bound exceeded: no solution with height <= {height}")]
    SolverBoundExceeded { height: u64 },
    #[error("singular curve")]
    Singular,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SolverBoundExceeded { .. } | Error::FactorBoundExceeded { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
