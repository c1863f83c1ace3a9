use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Caller violated an operation precondition.
    Usage(String),
    /// Operands come from different field specifications.
    FieldMismatch,
    /// The field data is inconsistent or malformed.
    InvalidSpec(String),
    /// The field falls outside the supported class (monogenic, Galois, h = 1).
    UnsupportedField(String),
    /// Numeric conjugates do not reproduce the exact norm.
    InsufficientPrecision { relative_error: f64 },
    /// A work budget was exceeded; `needed` and `budget` are in the same unit.
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    /// A bounded search failed to find the object it was looking for.
    SearchBound(String),
    /// A fixed-width fast path would overflow.
    Overflow(&'static str),
    /// Volume refinement could not reach the requested gap.
    ToleranceUnreachable { gap: f64, tolerance: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Usage(msg) => write!(f, "usage error: {msg}"),
            Error::FieldMismatch => write!(f, "operands belong to different fields"),
            Error::InvalidSpec(msg) => write!(f, "invalid field specification: {msg}"),
            Error::UnsupportedField(msg) => write!(f, "unsupported field: {msg}"),
            Error::InsufficientPrecision { relative_error } => write!(
                f,
                "embedding precision insufficient (relative error {relative_error:e})"
            ),
            Error::BudgetExceeded {
                what,
                needed,
                budget,
            } => write!(f, "{what}: budget exceeded ({needed} > {budget})"),
            Error::SearchBound(msg) => write!(f, "search bound reached: {msg}"),
            Error::Overflow(what) => write!(f, "fixed-width overflow in {what}"),
            Error::ToleranceUnreachable { gap, tolerance } => write!(
                f,
                "volume gap {gap:e} above tolerance {tolerance:e} at cell budget"
            ),
        }
    }
}
