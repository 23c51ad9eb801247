//! Decimal-digit precision bookkeeping.
//!
//! All floating computations take an explicit precision in decimal digits.
//! The working mantissa carries extra guard bits beyond the requested digits.

/// Requested precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Prec(pub u32);

pub const LOG2_10: f64 = 3.321928094887362;

impl Prec {
    /// Mantissa bits used for computations at this precision.
    pub fn bits(self) -> u32 {
        (self.0 as f64 * LOG2_10).ceil() as u32 + 64
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    /// 10^(-self + offset) as an f64-exponent threshold helper; returned as
    /// (mantissa 10-exponent) for comparisons via `Float::exp10_cmp`.
    pub fn tol_exp(self, offset: i64) -> i64 {
        -(self.0 as i64) + offset
    }
}

impl From<u32> for Prec {
    fn from(d: u32) -> Self {
        Prec(d)
    }
}
