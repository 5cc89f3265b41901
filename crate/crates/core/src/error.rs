use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root restricted to roots of unity")]
    SqrtNotRootOfUnity,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("elements belong to different groups")]
    MixedGroups,
    #[error("element enumeration requires a finite group")]
    InfiniteGroup,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("tensor product is only defined for associative gradings")]
    LieTensor,
    #[error("operators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("operator {0} does not preserve the product")]
    NotAutomorphism(usize),
    #[error("operator {0}: {1}")]
    Spectrum(usize, String),
    #[error("not an involution sign function")]
    NotInvolutionSign,
    #[error("twisting element must be nonzero")]
    ZeroTwist,
    #[error("not fine: refines to a division grading")]
    NotFine,
    #[error("tuple mixes symmetric and skew labels")]
    MixedSymmetry,
    #[error("involution kinds differ")]
    KindMismatch,
    #[error("not a grading: {0}")]
    NotGrading(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
