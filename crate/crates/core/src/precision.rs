//! Working-precision configuration, passed explicitly to every evaluator.

use crate::error::{Error, Result};
use crate::real::Real;

pub const DEFAULT_DIGITS: u32 = 30;
pub const MIN_DIGITS: u32 = 15;
/// Ceiling imposed by the double-double representation.
pub const MAX_DIGITS: u32 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: DEFAULT_DIGITS,
        }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self> {
        if !(MIN_DIGITS..=MAX_DIGITS).contains(&digits) {
            return Err(Error::InvalidPrecision {
                digits,
                min: MIN_DIGITS,
                max: MAX_DIGITS,
            });
        }
        Ok(Precision { digits })
    }

    /// Double precision (16 digits).
    pub fn double() -> Self {
        Precision { digits: 16 }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Target relative error `10^-digits`, floored at what `R` can carry.
    pub fn eps_for<R: Real>(&self) -> f64 {
        let d = self.digits.min(R::MAX_DIGITS);
        10f64.powi(-(d as i32)).max(R::EPS)
    }
}
