use alloc::string::String;
use core::fmt;

/// Errors raised by the exact computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Attempted to invert zero.
    ZeroInverse,
    /// An element that must be nonzero was zero.
    ZeroElement,
    /// `j` does not divide `i` where a subfield relation was required.
    NotDivisor { i: usize, j: usize },
    /// A field degree that was never materialised in the tower.
    MissingDegree(usize),
    /// `q` is not a prime power, or is outside the supported range.
    BadFieldSize(u64),
    /// An enumeration would exceed the configured budget.
    BudgetExceeded { required: u64, budget: u64 },
    /// A coweight that should be dominant (weakly decreasing) is not.
    NonDominant,
    /// Element degree differs from the one the operation requires.
    DegreeMismatch { expected: usize, got: usize },
    /// Truncation precision was not sufficient to certify the result.
    InsufficientPrecision,
    /// A result would fall outside the enumerated window.
    WindowOverflow(String),
    /// Operands live on different base sets / groups.
    BaseMismatch,
    /// Matrix or operator is not invertible.
    Singular,
    /// Shapes or sizes that do not fit together.
    Shape(String),
    /// Input rejected by a precondition.
    Invalid(String),
    /// The requested configuration is not implemented.
    Unsupported(String),
    /// A verification failed; the string carries the witness.
    CheckFailed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroInverse => write!(f, "inversion of zero"),
            Error::ZeroElement => write!(f, "element must be nonzero"),
            Error::NotDivisor { i, j } => write!(f, "{j} does not divide {i}"),
            Error::MissingDegree(i) => write!(f, "degree {i} not present in tower"),
            Error::BadFieldSize(q) => write!(f, "unsupported field size {q}"),
            Error::BudgetExceeded { required, budget } => {
                write!(f, "enumeration needs {required} elements, budget is {budget}")
            }
            Error::NonDominant => write!(f, "coweight is not dominant"),
            Error::DegreeMismatch { expected, got } => {
                write!(f, "expected degree {expected}, got {got}")
            }
            Error::InsufficientPrecision => write!(f, "insufficient t-adic precision"),
            Error::WindowOverflow(s) => write!(f, "window overflow: {s}"),
            Error::BaseMismatch => write!(f, "operands on different base sets"),
            Error::Singular => write!(f, "singular matrix"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::CheckFailed(s) => write!(f, "check failed: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
