use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {0} outside the supported range 2..=64")]
    AmbientDimension(usize),

    #[error("operation requires a nonzero subspace")]
    ZeroDimensional,

    #[error("vector is not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("stabilizer of a {dim}-dimensional subspace of R^{n} in SO({n}) is trivial")]
    TrivialStabilizer { dim: usize, n: usize },

    #[error("letter {index} out of range for {len} factors")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("closure cap must be at least 1")]
    InvalidCap,

    #[error("cosine {0} is outside [-1, 1]")]
    OutOfRange(String),

    #[error("working precision of {0} digits is below the minimum of 16")]
    PrecisionTooLow(u32),

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("bad partition: {0}")]
    BadPartition(String),

    #[error("no generators supplied")]
    EmptyGenerators,

    #[error("target sub-sphere has radius zero")]
    DegenerateTarget,

    #[error("point set is empty")]
    EmptySet,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("config error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
