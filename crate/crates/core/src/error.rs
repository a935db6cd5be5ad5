use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A raster or spectrum had zero width/height or a data length that does
    /// not match `width * height`.
    Dimension { width: usize, height: usize, len: usize },
    /// Two operands that must share dimensions did not.
    Mismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    InvalidParameter(String),
    /// Rejection sampling gave up.
    Generation(String),
    /// Classifier could not be fit or queried.
    Classifier(String),
    /// Evaluation reports or protocols that cannot be combined.
    Protocol(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { width, height, len } => write!(
                f,
                "invalid dimensions {width}x{height} for {len} samples"
            ),
            Error::Mismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Generation(msg) => write!(f, "generation failed: {msg}"),
            Error::Classifier(msg) => write!(f, "classifier error: {msg}"),
            Error::Protocol(msg) => write!(f, "evaluation protocol error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
