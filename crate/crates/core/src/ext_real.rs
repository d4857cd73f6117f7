use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Sub};

use crate::{Error, Result};

/// A value of `R ∪ {+inf}`.
///
/// `+inf` is its own state rather than an IEEE infinity, so `0 * inf` can
/// only be requested explicitly through [`ExtReal::scale`], which refuses it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Lifts a float. `f64::INFINITY` maps to `PosInf`; NaN and `-inf` are rejected.
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value == f64::NEG_INFINITY {
            Err(Error::NonFinite)
        } else if value == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else {
            Ok(ExtReal::Finite(value))
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::PosInf => None,
        }
    }

    /// Lossy conversion for reporting; `+inf` becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// `c * self` for `c >= 0`. `0 * (+inf)` is an error.
    pub fn scale(self, c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidParameter("scale factor must be finite and >= 0"));
        }
        match self {
            ExtReal::Finite(v) => Ok(ExtReal::Finite(c * v)),
            ExtReal::PosInf if c == 0.0 => Err(Error::UndefinedProduct),
            ExtReal::PosInf => Ok(ExtReal::PosInf),
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `alpha * a + (1 - alpha) * b` for `alpha` in `[0, 1]`.
    ///
    /// A term with zero weight is dropped instead of multiplied, so the
    /// endpoints `alpha = 0, 1` never form `0 * (+inf)`.
    pub fn convex_combination(alpha: f64, a: ExtReal, b: ExtReal) -> Result<ExtReal> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter("convex weight must lie in [0, 1]"));
        }
        let beta = 1.0 - alpha;
        if alpha == 0.0 {
            return Ok(b);
        }
        if beta == 0.0 {
            return Ok(a);
        }
        Ok(a.scale(alpha)? + b.scale(beta)?)
    }
}

impl From<f64> for ExtReal {
    /// Panics on NaN; use [`ExtReal::new`] for untrusted input.
    fn from(value: f64) -> Self {
        ExtReal::new(value).expect("NaN or -inf cannot be an extended real")
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::Finite(a + rhs),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }
}

impl Sub<f64> for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: f64) -> ExtReal {
        self + (-rhs)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            (ExtReal::PosInf, ExtReal::PosInf) => Some(Ordering::Equal),
            (ExtReal::PosInf, ExtReal::Finite(_)) => Some(Ordering::Greater),
            (ExtReal::Finite(_), ExtReal::PosInf) => Some(Ordering::Less),
        }
    }
}

impl PartialEq<f64> for ExtReal {
    fn eq(&self, other: &f64) -> bool {
        matches!(self, ExtReal::Finite(v) if v == other)
    }
}

impl PartialOrd<f64> for ExtReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&ExtReal::Finite(*other))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtReal::PosInf => f.write_str("inf"),
        }
    }
}
