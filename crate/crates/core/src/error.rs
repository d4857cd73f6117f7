use core::fmt;

#[derive(Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Two operands live in spaces of different dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Vectors must have at least one coordinate.
    EmptyVector,
    /// A NaN or infinite coordinate or scalar was supplied.
    NonFinite,
    /// A law or cover parameter violates its invariant.
    InvalidParameter(&'static str),
    /// A cover parameter (or a witness) lies outside the parameter set.
    ParameterOutsideSet,
    /// The function is `+inf` at the base point of a subgradient check.
    OutsideDomain,
    /// A sample or probe list was empty.
    NoSamples,
    /// `0 * (+inf)` was requested.
    UndefinedProduct,
    /// The requested closed-form branch does not apply at this point.
    WrongBranch(&'static str),
    /// Malformed grid specification.
    InvalidGrid(&'static str),
    /// A grid would exceed its point budget.
    BudgetExceeded { points: u128, budget: u128 },
    /// No grid point produced a finite value.
    NoFiniteValue,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyVector => f.write_str("vector must have at least one coordinate"),
            Error::NonFinite => f.write_str("non-finite value"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ParameterOutsideSet => f.write_str("parameter outside the cover parameter set"),
            Error::OutsideDomain => f.write_str("function is +inf at the base point"),
            Error::NoSamples => f.write_str("no samples supplied"),
            Error::UndefinedProduct => f.write_str("0 * (+inf) is undefined"),
            Error::WrongBranch(msg) => write!(f, "closed form not applicable: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            Error::BudgetExceeded { points, budget } => {
                write!(f, "grid has {points} points, budget is {budget}")
            }
            Error::NoFiniteValue => f.write_str("no finite value on the grid"),
        }
    }
}

impl core::error::Error for Error {}
