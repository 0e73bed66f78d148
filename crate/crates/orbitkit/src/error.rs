use thiserror::Error;

/// Errors surfaced by the exact-arithmetic and chart machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("index {index} out of range (0..{bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("lambda has all entries equal; its isotropy is the whole algebra")]
    ConstantLambda,
    #[error("lambda is not block-sorted: equal entries must be contiguous")]
    NotBlockSorted,
    #[error("matrix support does not lie in the required root spaces")]
    WrongSupport,
    #[error("group element lies outside the big cell of this chart")]
    OutsideBigCell,
    #[error("image point leaves the target chart")]
    OutsideChart,
    #[error("base point does not lie in the chart overlap")]
    OutsideOverlap,
    #[error("matrix is not tangent to the orbit at this point")]
    NotTangent,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
