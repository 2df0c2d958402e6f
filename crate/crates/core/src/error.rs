use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("characteristic {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("relation `{0}` has a nonzero constant term")]
    UnitRelation(String),
    #[error("the relations generate the unit ideal (zero ring)")]
    ZeroRing,
    #[error("degree cap {cap} is too small: {reason}")]
    CapTooSmall { cap: u32, reason: String },
    #[error("the algebra is not Artinian")]
    NotArtinian,
    #[error("result changes between the degree cap and its stabilization cap")]
    CapUnstable,
    #[error("a boundary is not contained in the cycles (d^2 != 0 upstream)")]
    ContainmentViolation,
    #[error("the matrix is not graded, which is required over a non-Artinian algebra")]
    NotGraded,
    #[error("element is not regular on the algebra")]
    NotRegular,
    #[error("the algebra has positive depth (zero socle)")]
    PositiveDepth,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
