use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator is zero")]
    DenominatorZero,
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("argument must be non-zero")]
    ZeroArgument,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("matrix is singular to the working precision")]
    SingularToPrecision,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid ordering preset: {0}")]
    InvalidPreset(String),
    #[error("matrix is not upper triangular")]
    NotUpperTriangular,
    #[error("element is not in B+ = N0 T+: {0}")]
    NotInBPlus(String),
    #[error("character not admissible: {0}")]
    CharacterNotAdmissible(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }
}
