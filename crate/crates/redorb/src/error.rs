use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable integer code
/// through [`Error::code`], which the C ABI and the CLI reuse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("ring too small: {0}")]
    RingTooSmall(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("cannot divide {0} by 2 in this ring")]
    HalvingError(String),
    #[error("{0} is not a square in this ring")]
    NotASquare(String),
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("discriminant is not a unit")]
    NonUnitDiscriminant,
    #[error("slicing entry b_{{{0}}} is zero")]
    ZeroSliceEntry(usize),
    #[error("enumeration box of size {size} exceeds cap {cap}")]
    BoxTooLarge { size: u128, cap: u128 },
    #[error("level {level} exceeds the configured maximum {max}")]
    LevelTooDeep { level: u32, max: u32 },
    #[error("orbit counts did not stabilize: {0}")]
    StabilizationFailure(String),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("factorization budget exhausted for {0}")]
    FactorizationTimeout(String),
    #[error("r = {r} has the wrong parity for n = {n}")]
    InvalidParity { n: usize, r: usize },
    #[error("element {0} is not invertible")]
    NotInvertible(String),
    #[error("matrix is not in the group: {0}")]
    NotInGroup(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Stable numeric code. Zero is reserved for success.
    pub fn code(&self) -> i32 {
        match self {
            Error::DegenerateInput(_) => 1,
            Error::RingTooSmall(_) => 2,
            Error::LengthMismatch { .. } => 3,
            Error::HalvingError(_) => 4,
            Error::NotASquare(_) => 5,
            Error::IndexError(_) => 6,
            Error::NonUnitDiscriminant => 7,
            Error::ZeroSliceEntry(_) => 8,
            Error::BoxTooLarge { .. } => 9,
            Error::LevelTooDeep { .. } => 10,
            Error::StabilizationFailure(_) => 11,
            Error::InstanceTooLarge(_) => 12,
            Error::FactorizationTimeout(_) => 13,
            Error::InvalidParity { .. } => 14,
            Error::NotInvertible(_) => 15,
            Error::NotInGroup(_) => 16,
            Error::RingMismatch(_) => 17,
            Error::Parse(_) => 18,
            Error::Usage(_) => 19,
            Error::Io(_) => 20,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
