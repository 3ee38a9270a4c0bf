use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix has odd diagonal entry at index {index}")]
    OddDiagonal { index: usize },
    #[error("non-integral value where an integer was required: {0}")]
    NonIntegral(String),
    #[error("lattice is not positive definite")]
    NotPositiveDefinite,
    #[error("forms do not match: {0}")]
    FormMismatch(String),
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: BigInt, cap: u64 },
    #[error("element {0} is not a valid tuple for this module")]
    ElementOutOfRange(String),
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("glue group is not totally isotropic: {0}")]
    NotIsotropic(String),
    #[error("vector is not primitive isotropic: {0}")]
    NotPrimitiveIsotropic(String),
    #[error("matrix is not in the required group: {0}")]
    NotInGroup(String),
    #[error("invalid root lattice: {0}")]
    InvalidRootLattice(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}
