use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Broad category of an [`Error`], used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// A caller-supplied parameter is out of range.
    Parameter,
    /// Input data violates a structural invariant.
    Data,
    /// An iterative routine failed numerically or did not converge.
    Numeric,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidParameter(String),
    InvalidInput(String),
    LengthMismatch { expected: usize, found: usize },
    NonFinite { index: usize },
    /// `d_K(x_i) = 0`: the point has at least K exact duplicates.
    DuplicatePoint { index: usize, scale_k: usize },
    EmptyClass(String),
    SingularSystem,
    NotConverged { iterations: usize, residual: f64 },
    NumericFailure { iteration: usize },
    MissingCell { row: usize, column: usize },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter(_) | Error::EmptyClass(_) => ErrorKind::Parameter,
            Error::InvalidInput(_)
            | Error::LengthMismatch { .. }
            | Error::NonFinite { .. }
            | Error::DuplicatePoint { .. }
            | Error::MissingCell { .. } => ErrorKind::Data,
            Error::SingularSystem
            | Error::NotConverged { .. }
            | Error::NumericFailure { .. } => ErrorKind::Numeric,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite { index } => write!(f, "non-finite value at flat index {index}"),
            Error::DuplicatePoint { index, scale_k } => write!(
                f,
                "point {index} has zero distance to its {scale_k}-th nearest neighbor (duplicate cluster)"
            ),
            Error::EmptyClass(m) => write!(f, "empty class: {m}"),
            Error::SingularSystem => write!(f, "normal equations are singular"),
            Error::NotConverged { iterations, residual } => write!(
                f,
                "did not converge after {iterations} iterations (best residual {residual:e})"
            ),
            Error::NumericFailure { iteration } => {
                write!(f, "non-finite iterate at iteration {iteration}")
            }
            Error::MissingCell { row, column } => {
                write!(f, "missing value in aggregation table at row {row}, column {column}")
            }
        }
    }
}

impl core::error::Error for Error {}
