use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("no k <= {half} with C({n},2k) != C({n}-{i},2k) mod 2", half = .i / 2)]
    NoSolvingK { n: u32, i: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("generator `{0}` has no total-square rule")]
    UnsupportedGenerator(String),

    #[error("expected a homogeneous element, got {0}")]
    Inhomogeneous(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid fixed-point dimension {fixed} for sphere of dimension {dim}")]
    InvalidFixedDim { dim: u32, fixed: u32 },

    #[error("graded pieces of {0} are not finite; cannot enumerate sections")]
    InfiniteEnumeration(String),

    #[error("model has no degree-halving kappa")]
    NoKappa,

    #[error("Sq^{k} of the class is not in the span of the sigma-images")]
    NotInSpan { k: u32 },

    #[error("decomposition of Sq^{k} is not unique (kernel dimension {kernel})")]
    NonUniqueDecomposition { k: u32, kernel: usize },

    #[error("truncation degree {truncation} is below the required degree {required}")]
    TruncationTooSmall { truncation: u32, required: u32 },
}
