use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Variants mirror the failure modes of the individual operations; callers
/// generally match on the variant rather than the message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point is not a root of the form")]
    NotARoot,
    #[error("form is identically zero")]
    DegenerateForm,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("cubic contains the line through the given points")]
    DegenerateCubic,
    #[error("point is singular")]
    SingularPoint,
    #[error("model is singular: {0}")]
    SingularModel(String),
    #[error("map is undefined at the point after clearing")]
    IndeterminatePoint,
    #[error("fiber degenerates: {0}")]
    DegenerateFiber(String),
    #[error("fiber is singular")]
    SingularFiber,
    #[error("not a fibration: {0}")]
    NotAFibration(String),
    #[error("elimination failed: {0}")]
    EliminationFailure(String),
    #[error("not a multisection: {0}")]
    NotAMultisection(String),
    #[error("all row-1 entries vanish at the base point")]
    RankZeroLocus,
    #[error("no rational multisection point over the base point")]
    NoSeed,
    #[error("bad pencil: {0}")]
    BadPencil(String),
    #[error("genericity check failed: {0}")]
    GenericityFailure(String),
    #[error("audit step {0} failed: {1}")]
    AuditFailure(u32, String),
    #[error("bad prime {0}: {1}")]
    BadPrime(u64, String),
    #[error("enumeration budget exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
