//! Two-step function field towers over a base field K:
//!
//!   K(t)  ->  K(C) = K(t)[u]/(u^2 - h(t))  ->  K(Z) = K(C)[x]/(x^2 + s1 x + s0)
//!
//! Elements of K(C) are pairs a + b u of rational functions; elements of
//! K(Z) are pairs c0 + c1 x of K(C)-elements, reduced modulo the monic
//! defining quadratic.

use super::field::{Field, FieldSqrt};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use std::sync::Arc;

/// Context for K(C): the defining polynomial h of u^2 = h(t).
#[derive(Debug)]
pub struct CurveRing<F: Field> {
    pub h: Poly<F>,
}

impl<F: Field> PartialEq for CurveRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h
    }
}

impl<F: Field> CurveRing<F> {
    pub fn new(h: Poly<F>) -> Arc<Self> {
        assert!(!h.is_zero());
        Arc::new(CurveRing { h })
    }

    pub fn zero(self: &Arc<Self>) -> CurveFn<F> {
        let z = self.h.ctx();
        CurveFn {
            ring: Arc::clone(self),
            a: RatFunc::zero(z),
            b: RatFunc::zero(z),
        }
    }

    pub fn one(self: &Arc<Self>) -> CurveFn<F> {
        let z = self.h.ctx();
        CurveFn {
            ring: Arc::clone(self),
            a: RatFunc::one(z),
            b: RatFunc::zero(z),
        }
    }

    /// The coordinate function t.
    pub fn t(self: &Arc<Self>) -> CurveFn<F> {
        let z = self.h.ctx();
        CurveFn {
            ring: Arc::clone(self),
            a: RatFunc::var(z),
            b: RatFunc::zero(z),
        }
    }

    /// The coordinate function u.
    pub fn u(self: &Arc<Self>) -> CurveFn<F> {
        let z = self.h.ctx();
        CurveFn {
            ring: Arc::clone(self),
            a: RatFunc::zero(z),
            b: RatFunc::one(z),
        }
    }

    pub fn from_ratfunc(self: &Arc<Self>, a: RatFunc<F>) -> CurveFn<F> {
        let z = self.h.ctx();
        CurveFn {
            ring: Arc::clone(self),
            a,
            b: RatFunc::zero(z),
        }
    }

    pub fn elem(self: &Arc<Self>, a: RatFunc<F>, b: RatFunc<F>) -> CurveFn<F> {
        CurveFn {
            ring: Arc::clone(self),
            a,
            b,
        }
    }
}

/// a + b u in K(C).
#[derive(Clone, Debug)]
pub struct CurveFn<F: Field> {
    ring: Arc<CurveRing<F>>,
    pub a: RatFunc<F>,
    pub b: RatFunc<F>,
}

impl<F: Field> PartialEq for CurveFn<F> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl<F: Field> CurveFn<F> {
    pub fn ring(&self) -> &Arc<CurveRing<F>> {
        &self.ring
    }

    fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub fn is_ratfunc(&self) -> bool {
        self.b.is_zero()
    }

    /// Conjugate under the hyperelliptic involution u -> -u.
    pub fn conj(&self) -> Self {
        CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.clone(),
            b: self.b.neg(),
        }
    }

    /// Norm a^2 - b^2 h down to K(t).
    pub fn norm(&self) -> RatFunc<F> {
        let h = RatFunc::from_poly(self.ring.h.clone());
        self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&h))
    }

    /// Derivation d/dt extended by u' = h'(t) u / (2 h(t)).
    pub fn derivative(&self) -> Self {
        let h = RatFunc::from_poly(self.ring.h.clone());
        let hp = RatFunc::from_poly(self.ring.h.derivative());
        let two = self.a.from_i64_like(2);
        let corr = self.b.mul(&hp).div(&h.mul(&two)).expect("h nonzero");
        CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.derivative(),
            b: self.b.derivative().add(&corr),
        }
    }

    /// Value at an affine point (t0, u0) of the curve, in any field G that
    /// the coefficients map into.
    pub fn eval_at<G: Field>(
        &self,
        map: &impl Fn(&F) -> G,
        t0: &G,
        u0: &G,
    ) -> Result<G> {
        let av = eval_ratfunc(&self.a, map, t0)?;
        let bv = eval_ratfunc(&self.b, map, t0)?;
        Ok(av.add(&bv.mul(u0)))
    }

    pub fn map<G: Field>(&self, ring: &Arc<CurveRing<G>>, f: &impl Fn(&F) -> G) -> CurveFn<G> {
        CurveFn {
            ring: Arc::clone(ring),
            a: map_ratfunc(&self.a, f),
            b: map_ratfunc(&self.b, f),
        }
    }
}

pub fn map_poly<F: Field, G: Field>(p: &Poly<F>, f: &impl Fn(&F) -> G) -> Poly<G> {
    let zero = f(p.ctx());
    Poly::new(&zero.zero_like(), p.coeffs().iter().map(f).collect())
}

pub fn map_ratfunc<F: Field, G: Field>(r: &RatFunc<F>, f: &impl Fn(&F) -> G) -> RatFunc<G> {
    RatFunc::new(map_poly(r.num(), f), map_poly(r.den(), f)).expect("denominator stays nonzero")
}

pub fn eval_poly_at<F: Field, G: Field>(p: &Poly<F>, map: &impl Fn(&F) -> G, x: &G) -> G {
    let mut acc = x.zero_like();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(x).add(&map(c));
    }
    acc
}

pub fn eval_ratfunc<F: Field, G: Field>(
    r: &RatFunc<F>,
    map: &impl Fn(&F) -> G,
    x: &G,
) -> Result<G> {
    let d = eval_poly_at(r.den(), map, x);
    if d.is_zero() {
        return Err(Error::DivisionByZero("rational function at a pole"));
    }
    Ok(eval_poly_at(r.num(), map, x).mul(&d.inv()?))
}

impl<F: Field> Field for CurveFn<F> {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }

    fn one_like(&self) -> Self {
        self.ring.one()
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.add(&rhs.a),
            b: self.b.add(&rhs.b),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.sub(&rhs.a),
            b: self.b.sub(&rhs.b),
        }
    }

    fn neg(&self) -> Self {
        CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.neg(),
            b: self.b.neg(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_ring(rhs));
        let h = RatFunc::from_poly(self.ring.h.clone());
        let a = self
            .a
            .mul(&rhs.a)
            .add(&self.b.mul(&rhs.b).mul(&h));
        let b = self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a));
        CurveFn {
            ring: Arc::clone(&self.ring),
            a,
            b,
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("curve function inverse"));
        }
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::Internal("vanishing norm in K(C); h is a square".into()));
        }
        let ninv = n.inv()?;
        Ok(CurveFn {
            ring: Arc::clone(&self.ring),
            a: self.a.mul(&ninv),
            b: self.b.neg().mul(&ninv),
        })
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.ring.from_ratfunc(self.a.from_i64_like(n))
    }

    fn content_scale(v: &[Self]) -> Option<Self> {
        // scale by a K(t)-unit computed from all a/b components jointly
        let mut parts: Vec<RatFunc<F>> = Vec::with_capacity(2 * v.len());
        let mut ring = None;
        for e in v {
            if ring.is_none() {
                ring = Some(Arc::clone(&e.ring));
            }
            parts.push(e.a.clone());
            parts.push(e.b.clone());
        }
        let scale = RatFunc::content_scale(&parts)?;
        Some(ring?.from_ratfunc(scale))
    }
}

impl<F: FieldSqrt> FieldSqrt for CurveFn<F> {
    fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let h = RatFunc::from_poly(self.ring.h.clone());
        let two = self.a.from_i64_like(2);
        if self.b.is_zero() {
            // sqrt(A): either in K(t), or b-part only: (bu)^2 = b^2 h = A.
            if let Some(r) = self.a.sqrt_in_field() {
                return Some(self.ring.from_ratfunc(r));
            }
            let quot = self.a.div(&h).ok()?;
            if let Some(bb) = quot.sqrt_in_field() {
                return Some(self.ring.elem(bb.zero_like(), bb));
            }
            return None;
        }
        // (a + bu)^2 = a^2 + b^2 h + 2ab u = A + Bu:
        // a^2 = (A ± sqrt(A^2 - B^2 h)) / 2, b = B/(2a).
        let aa = &self.a;
        let bb = &self.b;
        let disc = aa.mul(aa).sub(&bb.mul(bb).mul(&h));
        let r = disc.sqrt_in_field()?;
        for sgn in [1i64, -1] {
            let r_signed = if sgn == 1 { r.clone() } else { r.neg() };
            let a2 = aa.add(&r_signed).div(&two).ok()?;
            if let Some(x) = a2.sqrt_in_field() {
                if x.is_zero() {
                    continue;
                }
                let y = bb.div(&two.mul(&x)).ok()?;
                let cand = self.ring.elem(x, y);
                if cand.mul(&cand) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

/// Context for K(Z) = K(C)[x]/(x^2 + s1 x + s0), the monic-normalized cover.
#[derive(Debug)]
pub struct CoverRing<F: Field> {
    pub curve: Arc<CurveRing<F>>,
    pub s1: CurveFn<F>,
    pub s0: CurveFn<F>,
}

impl<F: Field> PartialEq for CoverRing<F> {
    fn eq(&self, other: &Self) -> bool {
        self.s1 == other.s1 && self.s0 == other.s0 && *self.curve == *other.curve
    }
}

impl<F: Field> CoverRing<F> {
    pub fn new(curve: Arc<CurveRing<F>>, s1: CurveFn<F>, s0: CurveFn<F>) -> Arc<Self> {
        Arc::new(CoverRing { curve, s1, s0 })
    }

    pub fn zero(self: &Arc<Self>) -> CoverFn<F> {
        CoverFn {
            ring: Arc::clone(self),
            c0: self.curve.zero(),
            c1: self.curve.zero(),
        }
    }

    pub fn one(self: &Arc<Self>) -> CoverFn<F> {
        CoverFn {
            ring: Arc::clone(self),
            c0: self.curve.one(),
            c1: self.curve.zero(),
        }
    }

    /// The adjoined root x.
    pub fn x(self: &Arc<Self>) -> CoverFn<F> {
        CoverFn {
            ring: Arc::clone(self),
            c0: self.curve.zero(),
            c1: self.curve.one(),
        }
    }

    pub fn from_curvefn(self: &Arc<Self>, c: CurveFn<F>) -> CoverFn<F> {
        CoverFn {
            ring: Arc::clone(self),
            c0: c,
            c1: self.curve.zero(),
        }
    }

    pub fn elem(self: &Arc<Self>, c0: CurveFn<F>, c1: CurveFn<F>) -> CoverFn<F> {
        CoverFn {
            ring: Arc::clone(self),
            c0,
            c1,
        }
    }

    /// dx/dt on the cover, from implicit differentiation of the defining
    /// quadratic: dx/dt = -(s1' x + s0') / (2x + s1).
    pub fn dx_dt(self: &Arc<Self>) -> Result<CoverFn<F>> {
        let s1p = self.s1.derivative();
        let s0p = self.s0.derivative();
        let num = self
            .elem(s0p, s1p)
            .neg();
        let den = self.elem(self.s1.clone(), self.curve.one().add(&self.curve.one()));
        if den.is_zero() {
            return Err(Error::InseparableCover);
        }
        num.div(&den)
    }

    /// h(x) reduced modulo the defining quadratic.
    pub fn h_of_x(self: &Arc<Self>) -> CoverFn<F> {
        let x = self.x();
        let mut acc = self.zero();
        for c in self.curve.h.coeffs().iter().rev() {
            let cc = self.from_curvefn(self.curve.from_ratfunc(RatFunc::constant(c.clone())));
            acc = acc.mul(&x).add(&cc);
        }
        acc
    }
}

/// c0 + c1 x in K(Z).
#[derive(Clone, Debug)]
pub struct CoverFn<F: Field> {
    ring: Arc<CoverRing<F>>,
    pub c0: CurveFn<F>,
    pub c1: CurveFn<F>,
}

impl<F: Field> PartialEq for CoverFn<F> {
    fn eq(&self, other: &Self) -> bool {
        self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl<F: Field> CoverFn<F> {
    pub fn ring(&self) -> &Arc<CoverRing<F>> {
        &self.ring
    }

    /// Trace to K(C) for the quadratic extension: tr(c0 + c1 x) = 2 c0 - c1 s1.
    pub fn trace(&self) -> CurveFn<F> {
        let two = self.c0.from_i64_like(2);
        self.c0.mul(&two).sub(&self.c1.mul(&self.ring.s1))
    }

    /// Conjugate over K(C): x -> -s1 - x.
    pub fn conj_over_curve(&self) -> Self {
        CoverFn {
            ring: Arc::clone(&self.ring),
            c0: self.c0.sub(&self.c1.mul(&self.ring.s1)),
            c1: self.c1.neg(),
        }
    }

    /// Norm to K(C): c0^2 - c0 c1 s1 + c1^2 s0.
    pub fn norm_over_curve(&self) -> CurveFn<F> {
        self.c0
            .mul(&self.c0)
            .sub(&self.c0.mul(&self.c1).mul(&self.ring.s1))
            .add(&self.c1.mul(&self.c1).mul(&self.ring.s0))
    }

    /// Derivation d/dt on K(Z): coefficients move, and x moves by dx/dt.
    pub fn derivative(&self) -> Result<Self> {
        let dxdt = self.ring.dx_dt()?;
        let lin = CoverFn {
            ring: Arc::clone(&self.ring),
            c0: self.c0.derivative(),
            c1: self.c1.derivative(),
        };
        Ok(lin.add(&self.ring.from_curvefn(self.c1.clone()).mul(&dxdt)))
    }
}

impl<F: Field> Field for CoverFn<F> {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }

    fn one_like(&self) -> Self {
        self.ring.one()
    }

    fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        CoverFn {
            ring: Arc::clone(&self.ring),
            c0: self.c0.add(&rhs.c0),
            c1: self.c1.add(&rhs.c1),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        CoverFn {
            ring: Arc::clone(&self.ring),
            c0: self.c0.sub(&rhs.c0),
            c1: self.c1.sub(&rhs.c1),
        }
    }

    fn neg(&self) -> Self {
        CoverFn {
            ring: Arc::clone(&self.ring),
            c0: self.c0.neg(),
            c1: self.c1.neg(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // (c0 + c1 x)(d0 + d1 x) with x^2 = -s1 x - s0.
        let c0d0 = self.c0.mul(&rhs.c0);
        let c1d1 = self.c1.mul(&rhs.c1);
        let cross = self.c0.mul(&rhs.c1).add(&self.c1.mul(&rhs.c0));
        CoverFn {
            ring: Arc::clone(&self.ring),
            c0: c0d0.sub(&c1d1.mul(&self.ring.s0)),
            c1: cross.sub(&c1d1.mul(&self.ring.s1)),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("cover function inverse"));
        }
        let n = self.norm_over_curve();
        if n.is_zero() {
            return Err(Error::MalformedCorrespondence(
                "norm vanishes in K(Z); defining quadratic is reducible",
            ));
        }
        let ninv = n.inv()?;
        let conj = self.conj_over_curve();
        Ok(CoverFn {
            ring: Arc::clone(&self.ring),
            c0: conj.c0.mul(&ninv),
            c1: conj.c1.mul(&ninv),
        })
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.ring.from_curvefn(self.c0.from_i64_like(n))
    }
}

/// All square roots y = y0 + y1 x of a K(Z)-element, when they exist.
/// Used to realize the second projection: y with y^2 = h(x).
pub fn cover_sqrt<F: FieldSqrt>(target: &CoverFn<F>) -> Vec<CoverFn<F>> {
    let ring = target.ring().clone();
    let mut out: Vec<CoverFn<F>> = Vec::new();
    let mut push = |cand: CoverFn<F>| {
        if cand.mul(&cand) == *target {
            let negc = cand.neg();
            if !out.iter().any(|c| *c == cand || *c == negc) {
                out.push(cand);
            }
        }
    };
    let h0 = &target.c0;
    let h1 = &target.c1;
    let two = ring.curve.one().add(&ring.curve.one());
    let four = two.mul(&two);
    // y1 = 0 branch: y0^2 = c0 (requires c1 = 0).
    if h1.is_zero() {
        if let Some(r) = h0.sqrt_in_field() {
            push(ring.from_curvefn(r));
        }
    }
    // General branch: Y = y1^2 satisfies
    // Y^2 (s1^2 - 4 s0) + Y (2 h1 s1 - 4 h0) + h1^2 = 0.
    let s1 = &ring.s1;
    let s0 = &ring.s0;
    let qa = s1.mul(s1).sub(&four.mul(s0));
    let qb = two.mul(h1).mul(s1).sub(&four.mul(h0));
    let qc = h1.mul(h1);
    let mut candidates_y = Vec::new();
    if qa.is_zero() {
        if !qb.is_zero() {
            if let Ok(y) = qc.neg().div(&qb) {
                candidates_y.push(y);
            }
        }
    } else {
        let disc = qb.mul(&qb).sub(&four.mul(&qa).mul(&qc));
        if let Some(rd) = disc.sqrt_in_field() {
            for sgn in [1i64, -1] {
                let r_signed = if sgn == 1 { rd.clone() } else { rd.neg() };
                if let Ok(y) = qb.neg().add(&r_signed).div(&two.mul(&qa)) {
                    candidates_y.push(y);
                }
            }
        }
    }
    for y_sq in candidates_y {
        if let Some(y1) = y_sq.sqrt_in_field() {
            if y1.is_zero() {
                continue;
            }
            // y0 = (h1 + y1^2 s1) / (2 y1)
            if let Ok(y0) = h1.add(&y_sq.mul(s1)).div(&two.mul(&y1)) {
                push(ring.elem(y0, y1));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::numberfield::NumberField;

    /// The degree-5 model u^2 = t^5 - t^4 + t^3 + t^2 - 2t + 1 with the
    /// cover t^2 x^2 - x - t + 1 = 0 and y = u/t^3 - (t+1) u x / t^3.
    fn worked_example() -> (
        Arc<CurveRing<crate::exact::numberfield::AlgebraicNumber>>,
        Arc<CoverRing<crate::exact::numberfield::AlgebraicNumber>>,
        CoverFn<crate::exact::numberfield::AlgebraicNumber>,
    ) {
        let k = NumberField::rationals();
        let z = k.zero();
        let h = Poly::from_i64(&z, &[1, -2, 1, 1, -1, 1]);
        let curve = CurveRing::new(h);
        // monic form: x^2 - x/t^2 + (1-t)/t^2
        let t2 = Poly::from_i64(&z, &[0, 0, 1]);
        let s1 = curve.from_ratfunc(
            RatFunc::new(Poly::from_i64(&z, &[-1]), t2.clone()).unwrap(),
        );
        let s0 = curve.from_ratfunc(
            RatFunc::new(Poly::from_i64(&z, &[1, -1]), t2).unwrap(),
        );
        let cover = CoverRing::new(Arc::clone(&curve), s1, s0);
        // y = (1/t^3) u - ((t+1)/t^3) u x
        let t3 = Poly::from_i64(&z, &[0, 0, 0, 1]);
        let y0 = curve.elem(
            RatFunc::zero(&z),
            RatFunc::new(Poly::from_i64(&z, &[1]), t3.clone()).unwrap(),
        );
        let y1 = curve.elem(
            RatFunc::zero(&z),
            RatFunc::new(Poly::from_i64(&z, &[-1, -1]), t3).unwrap(),
        );
        let y = cover.elem(y0, y1);
        (curve, cover, y)
    }

    #[test]
    fn y_squares_to_h_of_x() {
        let (_, cover, y) = worked_example();
        assert_eq!(y.mul(&y), cover.h_of_x());
    }

    #[test]
    fn trace_of_x_matches() {
        let (curve, cover, _) = worked_example();
        // tr(x) = -s1 = 1/t^2
        let x = cover.x();
        let z = curve.h.ctx();
        let expected = curve.from_ratfunc(
            RatFunc::new(Poly::from_i64(z, &[1]), Poly::from_i64(z, &[0, 0, 1])).unwrap(),
        );
        assert_eq!(x.trace(), expected);
        // tr(1) = 2
        assert_eq!(cover.one().trace(), curve.one().add(&curve.one()));
    }

    #[test]
    fn cover_sqrt_recovers_y() {
        let (_, cover, y) = worked_example();
        let h_x = cover.h_of_x();
        let roots = cover_sqrt(&h_x);
        assert!(!roots.is_empty());
        assert!(roots.iter().any(|r| *r == y || *r == y.neg()));
    }

    #[test]
    fn derivative_satisfies_defining_identity() {
        let (_, cover, _) = worked_example();
        // d/dt of (x^2 + s1 x + s0) must vanish identically.
        let x = cover.x();
        let f = x.mul(&x)
            .add(&cover.from_curvefn(cover.s1.clone()).mul(&x))
            .add(&cover.from_curvefn(cover.s0.clone()));
        assert!(f.is_zero());
        let xx = x.mul(&x);
        let d = xx.derivative().unwrap();
        // d(x^2)/dt = 2x dx/dt
        let two_x = x.add(&x);
        let expect = two_x.mul(&cover.dx_dt().unwrap());
        assert_eq!(d, expect);
    }
}
