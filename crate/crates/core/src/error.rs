use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} derivations, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("derivation index {index} out of range 1..={m}")]
    DerivationIndex { index: usize, m: usize },

    #[error("leader of the zero operator is undefined")]
    ZeroOperator,

    #[error("division by zero")]
    DivisionByZero,

    #[error("inconsistent quotient: subgroup polynomial eventually exceeds the group polynomial")]
    InconsistentQuotient,

    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undefined name `{name}` at {pos}")]
    Undefined { name: String, pos: usize },

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("{0} is not supported in literal-composed mode")]
    LiteralMode(&'static str),

    #[error("invalid input: {0}")]
    Invalid(String),
}
