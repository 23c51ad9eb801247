//! The field abstraction used by every exact-arithmetic layer.
//!
//! Elements carry their parent context, so zero and one are derived from any
//! element rather than from an ambient type. This keeps towers of extensions
//! (number fields, rational function fields, curve function fields) uniform.

use crate::error::{Error, Result};
use std::fmt::Debug;

pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse; fails on zero.
    fn inv(&self) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Small-integer injection into the field of `self`.
    fn from_i64_like(&self, n: i64) -> Self {
        let one = self.one_like();
        let mut acc = self.zero_like();
        let mut k = n.unsigned_abs();
        // double-and-add
        let mut pow = one;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&pow);
            }
            pow = pow.add(&pow);
            k >>= 1;
        }
        if n < 0 {
            acc.neg()
        } else {
            acc
        }
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    /// x^n for n >= 0.
    fn pow_u(&self, n: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            k >>= 1;
        }
        acc
    }

    /// A nonzero scalar c such that multiplying the slice by c keeps
    /// representations small along gcd chains (None when no rescaling
    /// helps). Fields with rational coordinates strip common content;
    /// function fields clear denominators and divide out common factors.
    fn content_scale(_v: &[Self]) -> Option<Self> {
        None
    }

    /// Rescale a coefficient slice by one common nonzero scalar.
    fn strip_content_slice(v: &mut [Self]) {
        if let Some(c) = Self::content_scale(v) {
            for e in v.iter_mut() {
                *e = e.mul(&c);
            }
        }
    }
}

/// Checked division helper that names the caller in the error.
pub fn checked_inv<F: Field>(x: &F, what: &'static str) -> Result<F> {
    if x.is_zero() {
        return Err(Error::DivisionByZero(what));
    }
    x.inv()
}

/// Fields in which square roots can be decided and computed exactly.
pub trait FieldSqrt: Field {
    /// Some(r) with r*r = self when self is a square in this field.
    fn sqrt_in_field(&self) -> Option<Self>;

    fn is_square(&self) -> bool {
        self.sqrt_in_field().is_some()
    }
}
