use thiserror::Error;

/// Structural failures. A verification that merely comes out false is a
/// [`CheckResult`](crate::hopf::CheckResult), never an error.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("matrix is not nilpotent (dimension {dim})")]
    NotNilpotent { dim: usize },

    #[error("leg {leg} out of range for {legs} tensor legs")]
    LegOutOfRange { leg: usize, legs: usize },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("series expansion exceeded degree bound {bound}")]
    ExpansionOverflow { bound: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("counit of an analytic function at non-zero argument {0} is not rational")]
    NonRationalCounit(String),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for TwistError {
    fn from(e: std::io::Error) -> Self {
        TwistError::Io(e.to_string())
    }
}

pub type Result<T, E = TwistError> = std::result::Result<T, E>;
