use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown wavelet family `{0}`")]
    UnknownWavelet(String),
    #[error("invalid coarse level {0}")]
    InvalidCoarseLevel(i64),
    #[error("filter `{name}` fails orthonormality check: {detail}")]
    FilterNotOrthonormal { name: String, detail: String },
    #[error("sample length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("sample length {len} is shorter than the coarse level size {coarse}")]
    TooShort { len: usize, coarse: usize },
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("invalid neighborhood: {0}")]
    InvalidNeighborhood(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown test function `{0}`")]
    UnknownFunction(String),
    #[error("unknown estimator `{0}`")]
    UnknownEstimator(String),
    #[error("Hölder membership check failed: grid seminorm {seminorm} exceeds bound {bound}")]
    MembershipFailed { seminorm: f64, bound: f64 },
    #[error("bump support half-width {0} is too small for the requested smoothness budget")]
    BumpTooNarrow(f64),
    #[error("bump support exits [0, 1]: [{lo}, {hi}]")]
    BumpOutsideInterval { lo: f64, hi: f64 },
    #[error("estimator precondition violated: {0}")]
    Precondition(String),
    #[error("rate fit needs at least 3 points with positive risk: {0}")]
    RateFit(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
