//! Dynamic towers of quadratic extensions over a number field.
//!
//! Splitting Mumford divisors into points and solving fiber quadratics only
//! ever requires adjoining square roots, so extensions are represented as a
//! runtime tower K ⊂ K(√d1) ⊂ K(√d1)(√d2) ⊂ ... with exact pair arithmetic
//! at every level. Each adjoined root carries a complex seed pinning which
//! embedding is meant.

use super::field::{Field, FieldSqrt};
use super::numberfield::{AlgebraicNumber, NumberField};
use crate::error::{Error, Result};
use crate::prec::Prec;
use rug::Complex;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub enum TowerField {
    Base(Arc<NumberField>),
    Ext(Arc<ExtLevel>),
}

pub struct ExtLevel {
    pub below: TowerField,
    /// The adjoined element: s^2 = d, d a non-square below.
    pub d: TowerElt,
    /// Complex approximation of the chosen square root (modest precision).
    pub seed: Complex,
}

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerField::Base(k) => write!(f, "{}", k.name()),
            TowerField::Ext(e) => write!(f, "{:?}(sqrt{:?})", e.below, e.d),
        }
    }
}

impl PartialEq for TowerField {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (TowerField::Base(a), TowerField::Base(b)) => a == b,
            (TowerField::Ext(a), TowerField::Ext(b)) => {
                Arc::ptr_eq(a, b) || (a.below == b.below && a.d == b.d)
            }
            _ => false,
        }
    }
}

impl TowerField {
    pub fn base(k: &Arc<NumberField>) -> Self {
        TowerField::Base(Arc::clone(k))
    }

    pub fn height(&self) -> usize {
        match self {
            TowerField::Base(_) => 0,
            TowerField::Ext(e) => e.below.height() + 1,
        }
    }

    pub fn number_field(&self) -> Arc<NumberField> {
        match self {
            TowerField::Base(k) => Arc::clone(k),
            TowerField::Ext(e) => e.below.number_field(),
        }
    }

    pub fn zero(&self) -> TowerElt {
        match self {
            TowerField::Base(k) => TowerElt {
                parent: self.clone(),
                repr: Repr::Base(k.zero()),
            },
            TowerField::Ext(e) => {
                let z = e.below.zero();
                TowerElt {
                    parent: self.clone(),
                    repr: Repr::Ext(Box::new(z.clone()), Box::new(z)),
                }
            }
        }
    }

    pub fn one(&self) -> TowerElt {
        match self {
            TowerField::Base(k) => TowerElt {
                parent: self.clone(),
                repr: Repr::Base(k.one()),
            },
            TowerField::Ext(e) => {
                let o = e.below.one();
                let z = e.below.zero();
                TowerElt {
                    parent: self.clone(),
                    repr: Repr::Ext(Box::new(o), Box::new(z)),
                }
            }
        }
    }

    /// The adjoined square root at the top level of this field.
    pub fn top_root(&self) -> Result<TowerElt> {
        match self {
            TowerField::Base(_) => Err(Error::Internal("base field has no adjoined root".into())),
            TowerField::Ext(e) => {
                let z = e.below.zero();
                let o = e.below.one();
                Ok(TowerElt {
                    parent: self.clone(),
                    repr: Repr::Ext(Box::new(z), Box::new(o)),
                })
            }
        }
    }

    /// Lift an element from a lower level of the same tower into this field.
    pub fn promote(&self, x: &TowerElt) -> TowerElt {
        if x.parent == *self {
            return x.clone();
        }
        match self {
            TowerField::Base(_) => panic!("element does not belong to this tower"),
            TowerField::Ext(e) => {
                let lo = e.below.promote(x);
                let z = e.below.zero();
                TowerElt {
                    parent: self.clone(),
                    repr: Repr::Ext(Box::new(lo), Box::new(z)),
                }
            }
        }
    }

    pub fn from_algebraic(&self, x: &AlgebraicNumber) -> TowerElt {
        let base = TowerElt {
            parent: TowerField::Base(Arc::clone(&self.number_field())),
            repr: Repr::Base(x.clone()),
        };
        self.promote(&base)
    }
}

#[derive(Clone)]
enum Repr {
    Base(AlgebraicNumber),
    Ext(Box<TowerElt>, Box<TowerElt>),
}

/// Element of a quadratic tower: at each extension level, lo + hi * s.
#[derive(Clone)]
pub struct TowerElt {
    parent: TowerField,
    repr: Repr,
}

impl fmt::Debug for TowerElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Base(a) => write!(f, "{a:?}"),
            Repr::Ext(lo, hi) => write!(f, "({lo:?} + {hi:?}*s)"),
        }
    }
}

impl PartialEq for TowerElt {
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Base(a), Repr::Base(b)) => a == b,
            (Repr::Ext(a0, a1), Repr::Ext(b0, b1)) => a0 == b0 && a1 == b1,
            _ => false,
        }
    }
}

impl TowerElt {
    pub fn parent(&self) -> &TowerField {
        &self.parent
    }

    /// The element as a base-field value, if every extension coordinate is 0.
    pub fn descend(&self) -> Option<AlgebraicNumber> {
        match &self.repr {
            Repr::Base(a) => Some(a.clone()),
            Repr::Ext(lo, hi) => {
                if hi.is_zero() {
                    lo.descend()
                } else {
                    None
                }
            }
        }
    }

    /// Strip extension levels above `target` when the coordinates there
    /// vanish; Some(element of target) iff the value lies in that subfield.
    pub fn descend_to(&self, target: &TowerField) -> Option<TowerElt> {
        if self.parent == *target {
            return Some(self.clone());
        }
        match &self.repr {
            Repr::Base(_) => None,
            Repr::Ext(lo, hi) => {
                if hi.is_zero() {
                    lo.descend_to(target)
                } else {
                    None
                }
            }
        }
    }

    fn parts(&self) -> (&TowerElt, &TowerElt) {
        match &self.repr {
            Repr::Ext(lo, hi) => (lo, hi),
            Repr::Base(_) => unreachable!("parts called at base level"),
        }
    }

    fn ext_level(&self) -> &Arc<ExtLevel> {
        match &self.parent {
            TowerField::Ext(e) => e,
            TowerField::Base(_) => unreachable!(),
        }
    }

    fn rebuild(&self, lo: TowerElt, hi: TowerElt) -> TowerElt {
        TowerElt {
            parent: self.parent.clone(),
            repr: Repr::Ext(Box::new(lo), Box::new(hi)),
        }
    }

    /// Conjugate s -> -s at the top level (identity at the base).
    pub fn conj_top(&self) -> TowerElt {
        match &self.repr {
            Repr::Base(_) => self.clone(),
            Repr::Ext(lo, hi) => self.rebuild((**lo).clone(), hi.neg()),
        }
    }

    /// Numeric value under the pinned embeddings of every level.
    pub fn embed(&self, prec: Prec) -> Complex {
        match &self.repr {
            Repr::Base(a) => a.embed(prec),
            Repr::Ext(lo, hi) => {
                let e = self.ext_level();
                let bits = prec.bits();
                let dval = e.d.embed(prec);
                let mut s = dval.sqrt();
                // pick the branch closest to the recorded seed
                let d_plus = Complex::with_val(bits, &s - &e.seed).abs();
                let d_minus = Complex::with_val(bits, Complex::with_val(bits, -s.clone()) - &e.seed).abs();
                if d_minus.real() < d_plus.real() {
                    s = -s;
                }
                lo.embed(prec) + hi.embed(prec) * s
            }
        }
    }
}

impl Field for TowerElt {
    fn zero_like(&self) -> Self {
        self.parent.zero()
    }

    fn one_like(&self) -> Self {
        self.parent.one()
    }

    fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Base(a) => a.is_zero(),
            Repr::Ext(lo, hi) => lo.is_zero() && hi.is_zero(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.parent == rhs.parent, "mixed tower levels");
        match (&self.repr, &rhs.repr) {
            (Repr::Base(a), Repr::Base(b)) => TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(a.add(b)),
            },
            (Repr::Ext(a0, a1), Repr::Ext(b0, b1)) => {
                self.rebuild(a0.add(b0), a1.add(b1))
            }
            _ => panic!("mixed tower levels"),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn neg(&self) -> Self {
        match &self.repr {
            Repr::Base(a) => TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(a.neg()),
            },
            Repr::Ext(lo, hi) => self.rebuild(lo.neg(), hi.neg()),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.parent == rhs.parent, "mixed tower levels");
        match (&self.repr, &rhs.repr) {
            (Repr::Base(a), Repr::Base(b)) => TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(a.mul(b)),
            },
            (Repr::Ext(a0, a1), Repr::Ext(b0, b1)) => {
                let d = &self.ext_level().d;
                let lo = a0.mul(b0).add(&a1.mul(b1).mul(d));
                let hi = a0.mul(b1).add(&a1.mul(b0));
                self.rebuild(lo, hi)
            }
            _ => panic!("mixed tower levels"),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("tower element inverse"));
        }
        match &self.repr {
            Repr::Base(a) => Ok(TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(a.inv()?),
            }),
            Repr::Ext(lo, hi) => {
                let d = &self.ext_level().d;
                // (lo + hi s)^-1 = (lo - hi s) / (lo^2 - hi^2 d)
                let norm = lo.mul(lo).sub(&hi.mul(hi).mul(d));
                if norm.is_zero() {
                    return Err(Error::Internal(
                        "tower norm vanished; adjoined element was a square".into(),
                    ));
                }
                let ninv = norm.inv()?;
                Ok(self.rebuild(lo.mul(&ninv), hi.neg().mul(&ninv)))
            }
        }
    }

    fn from_i64_like(&self, n: i64) -> Self {
        match &self.repr {
            Repr::Base(a) => TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(a.from_i64_like(n)),
            },
            Repr::Ext(lo, _) => {
                let v = lo.from_i64_like(n);
                let z = lo.zero_like();
                self.rebuild(v, z)
            }
        }
    }
}

impl FieldSqrt for TowerElt {
    fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match &self.repr {
            Repr::Base(a) => a.sqrt_in_field().map(|r| TowerElt {
                parent: self.parent.clone(),
                repr: Repr::Base(r),
            }),
            Repr::Ext(lo, hi) => {
                let d = &self.ext_level().d;
                if hi.is_zero() {
                    if let Some(r) = lo.sqrt_in_field() {
                        let z = r.zero_like();
                        return Some(self.rebuild(r, z));
                    }
                    // sqrt(lo) = v * s with v = sqrt(lo / d)
                    let q = lo.mul(&d.inv().ok()?);
                    if let Some(v) = q.sqrt_in_field() {
                        let z = v.zero_like();
                        return Some(self.rebuild(z, v));
                    }
                    return None;
                }
                // (x + y s)^2 = lo + hi s: x^2 = (lo ± r)/2 with
                // r = sqrt(lo^2 - hi^2 d); y = hi/(2x).
                let r = lo.mul(lo).sub(&hi.mul(hi).mul(d)).sqrt_in_field()?;
                let two = lo.from_i64_like(2);
                let two_inv = two.inv().ok()?;
                for sgn in [1i64, -1] {
                    let rs = if sgn == 1 { r.clone() } else { r.neg() };
                    let x2 = lo.add(&rs).mul(&two_inv);
                    if let Some(x) = x2.sqrt_in_field() {
                        if x.is_zero() {
                            continue;
                        }
                        let y = hi.mul(&two.mul(&x).inv().ok()?);
                        let cand = self.rebuild(x, y);
                        if cand.mul(&cand) == *self {
                            return Some(cand);
                        }
                    }
                }
                None
            }
        }
    }
}

/// Square root of x, extending the tower by one level when necessary.
/// The embedding of the new root is the principal square root of embed(x).
pub fn sqrt_or_extend(field: &TowerField, x: &TowerElt, prec: Prec) -> (TowerField, TowerElt) {
    debug_assert!(x.parent() == field);
    if let Some(r) = x.sqrt_in_field() {
        return (field.clone(), r);
    }
    let seed = x.embed(Prec(60.min(prec.digits()))).sqrt();
    let level = Arc::new(ExtLevel {
        below: field.clone(),
        d: x.clone(),
        seed,
    });
    let bigger = TowerField::Ext(level);
    let root = bigger.top_root().expect("extension has a root");
    (bigger, root)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_arithmetic_and_sqrt() {
        let q = NumberField::rationals();
        let base = TowerField::base(&q);
        let two = base.zero().from_i64_like(2);
        let p = Prec(80);
        let (l1, r2) = sqrt_or_extend(&base, &two, p);
        assert_eq!(l1.height(), 1);
        assert_eq!(r2.mul(&r2), l1.promote(&two));
        // extend again by sqrt(3 + sqrt2)
        let three = l1.zero().from_i64_like(3);
        let x = three.add(&r2);
        let (l2, rx) = sqrt_or_extend(&l1, &x, p);
        assert_eq!(l2.height(), 2);
        assert_eq!(rx.mul(&rx), l2.promote(&x));
        // inverse round trip
        let inv = rx.inv().unwrap();
        assert!(rx.mul(&inv).is_one());
        // in-field sqrt: (1 + sqrt2)^2 = 3 + 2 sqrt2 is a square at level 1
        let cand = l1.promote(&three).add(&r2.add(&r2)).sub(&l1.zero().from_i64_like(0));
        let s = cand.sqrt_in_field().unwrap();
        assert_eq!(s.mul(&s), cand);
        // embeddings agree: sqrt2 ~ 1.414..
        let e = r2.embed(p);
        assert!((e.real().to_f64() - 1.4142135623730951).abs() < 1e-12);
    }

    #[test]
    fn square_detection_avoids_bogus_extension() {
        let q = NumberField::rationals();
        let base = TowerField::base(&q);
        let p = Prec(80);
        let (l1, r5) = sqrt_or_extend(&base, &base.zero().from_i64_like(5), p);
        // 5 is now a square at level 1
        let five = l1.zero().from_i64_like(5);
        let (l_same, root) = sqrt_or_extend(&l1, &five, p);
        assert_eq!(l_same.height(), 1);
        assert!(root == r5 || root == r5.neg());
    }
}
