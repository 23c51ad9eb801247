//! The discriminant-5 family: the universal curve over the (p, q)-plane, its
//! published correspondence, coordinate changes, and the exact verification
//! of the eigenform-zero section.

use crate::certify::one_form_action;
use crate::curves::{
    cantor_sub, fiber_divisor, point_class, validate_curve, Correspondence, CurveModel,
    MumfordDivisor,
};
use crate::error::{Error, Result};
use crate::exact::tower::{cover_sqrt, map_poly, map_ratfunc};
use crate::exact::{
    AlgebraicNumber, CoverRing, CurveFn, CurveRing, Field, FieldSqrt, NumberField, Poly, RatFunc,
};
use rug::Rational;
use std::sync::{Arc, OnceLock};

type K = AlgebraicNumber;
/// Functions of q over K.
pub type Fq = RatFunc<K>;
/// Functions of (p, q): rational in p with coefficients rational in q.
pub type Fpq = RatFunc<Fq>;

pub fn disc5_field() -> Arc<NumberField> {
    static FIELD: OnceLock<Arc<NumberField>> = OnceLock::new();
    Arc::clone(FIELD.get_or_init(|| NumberField::quadratic(5)))
}

fn alpha() -> K {
    disc5_field().gen()
}

/// Lift a K-scalar into the (p, q) function field.
fn cpq(c: &K) -> Fpq {
    RatFunc::constant(RatFunc::constant(c.clone()))
}

/// The coordinates p and q as elements of K(p, q).
fn var_p() -> Fpq {
    let zq = Fq::zero(&disc5_field().zero());
    RatFunc::var(&zq)
}

fn var_q() -> Fpq {
    RatFunc::constant(Fq::var(&disc5_field().zero()))
}

/// The family sextic h = t^6 + 2p t^5 + 10q t^3 + 10q^2 t - 5(p-1)q^2 as a
/// polynomial in t over K(p, q).
pub fn family_h() -> Poly<Fpq> {
    let p = var_p();
    let q = var_q();
    let z = p.zero_like();
    let c = |n: i64| cpq(&disc5_field().from_i64(n));
    let q2 = q.mul(&q);
    Poly::new(
        &z,
        vec![
            // -5(p-1)q^2
            c(-5).mul(&p.sub(&c(1))).mul(&q2),
            // 10 q^2
            c(10).mul(&q2),
            z.clone(),
            // 10 q
            c(10).mul(&q),
            z.clone(),
            // 2p
            c(2).mul(&p),
            c(1),
        ],
    )
}

/// The published family correspondence F over K(p, q) (second projection
/// solved in the function field, pinned by the gamma eigenvalue on t dt/u).
pub fn family_correspondence() -> &'static Correspondence<Fpq> {
    static CORR: OnceLock<Correspondence<Fpq>> = OnceLock::new();
    CORR.get_or_init(build_family_correspondence)
}

fn build_family_correspondence() -> Correspondence<Fpq> {
    let h = family_h();
    let curve = validate_curve(h.clone()).expect("family curve is valid generically");
    let ring = CurveRing::new(h);
    let p = var_p();
    let q = var_q();
    let z = p.zero_like();
    let a = cpq(&alpha());
    let c = |n: i64| cpq(&disc5_field().from_i64(n));
    let poly = |cs: Vec<Fpq>| Poly::new(&z, cs);
    // f2 = (2t - p)(4t + (3 + alpha) p)
    let f2_poly = poly(vec![p.neg(), c(2)])
        .mul(&poly(vec![c(3).add(&a).mul(&p), c(4)]));
    // f1 = 2(-alpha - 1) u + alpha(2t^3 - 2pt^2 + p^2 t + 2q)
    //      - (6t^3 - 6pt^2 - p^2 t - 10 q)
    let p2 = p.mul(&p);
    let f1_a = poly(vec![
        a.mul(&c(2)).mul(&q).add(&c(10).mul(&q)),
        a.mul(&p2).add(&p2),
        a.mul(&c(-2)).mul(&p).add(&c(6).mul(&p)),
        a.mul(&c(2)).sub(&c(6)),
    ]);
    let f1_b = c(-2).mul(&a.add(&c(1)));
    // f0 = -2((1 - alpha)t - p) u + alpha(2t^4 - p^2 t^2 + 6qt - 4pq)
    //      - (2t^4 - 2pt^3 + 3p^2 t^2 - 10qt + 10pq)
    let f0_a = poly(vec![
        a.mul(&c(-4)).mul(&p).mul(&q).sub(&c(10).mul(&p).mul(&q)),
        a.mul(&c(6)).mul(&q).add(&c(10).mul(&q)),
        a.neg().mul(&p2).sub(&c(3).mul(&p2)),
        c(2).mul(&p),
        a.mul(&c(2)).sub(&c(2)),
    ]);
    let f0_b = poly(vec![c(2).mul(&p), a.sub(&c(1)).mul(&c(2))]);
    let f2 = ring.from_ratfunc(RatFunc::from_poly(f2_poly));
    let f1 = ring.elem(
        RatFunc::from_poly(f1_a),
        RatFunc::from_poly(Poly::constant(f1_b)),
    );
    let f0 = ring.elem(RatFunc::from_poly(f0_a), RatFunc::from_poly(f0_b));
    // solve the second projection symbolically and pin by the eigenvalue
    // gamma = (1 + alpha)/2 on t dt/u
    let f2i = f2.inv().expect("f2 nonzero");
    let cover = CoverRing::new(Arc::clone(&ring), f1.mul(&f2i), f0.mul(&f2i));
    let h_x = cover.h_of_x();
    let roots = cover_sqrt(&h_x);
    assert!(!roots.is_empty(), "family h(x) must be a square in K(Z)");
    let two_inv = disc5_field()
        .from_i64(2)
        .inv()
        .expect("2 invertible");
    let gamma = disc5_field().one().add(&alpha()).mul(&two_inv);
    let gamma_pq = cpq(&gamma);
    for y in roots.iter().flat_map(|r| [r.clone(), r.neg()]) {
        let cand = Correspondence::new(
            curve.clone(),
            f2.clone(),
            f1.clone(),
            f0.clone(),
            y.c0.clone(),
            y.c1.clone(),
            5,
        )
        .expect("family correspondence is consistent");
        let m = one_form_action(&cand).expect("family action computes");
        if m[1][0].is_zero() && m[0][1].is_zero() && m[1][1] == gamma_pq {
            return cand;
        }
    }
    panic!("no orientation of the family y matches the gamma convention");
}

/// Specialize a (p, q)-family scalar at rational values.
fn eval_pq(x: &Fpq, p0: &K, q0: &K) -> Result<K> {
    let at_p: Fq = crate::exact::tower::eval_ratfunc(
        x,
        &|c: &Fq| c.clone(),
        &RatFunc::constant(p0.clone()),
    )?;
    at_p.eval(q0)
}

/// The family curve at a rational fiber (p, q).
pub fn disc5_curve(p0: &K, q0: &K) -> Result<CurveModel<K>> {
    let h = family_h();
    let coeffs: Result<Vec<K>> = h.coeffs().iter().map(|c| eval_pq(c, p0, q0)).collect();
    let hk = Poly::new(&disc5_field().zero(), coeffs?);
    if hk.degree() != Some(6) || !hk.is_squarefree()? {
        return Err(Error::SingularFiber);
    }
    validate_curve(hk).map_err(|_| Error::SingularFiber)
}

/// The family correspondence specialized at a rational fiber.
pub fn disc5_correspondence(p0: &K, q0: &K) -> Result<Correspondence<K>> {
    let fam = family_correspondence();
    let curve = disc5_curve(p0, q0)?;
    let spec_rf = |rf: &RatFunc<Fpq>| -> Result<RatFunc<K>> {
        let num: Result<Vec<K>> = rf.num().coeffs().iter().map(|c| eval_pq(c, p0, q0)).collect();
        let den: Result<Vec<K>> = rf.den().coeffs().iter().map(|c| eval_pq(c, p0, q0)).collect();
        let z = disc5_field().zero();
        RatFunc::new(Poly::new(&z, num?), Poly::new(&z, den?))
    };
    let ring = CurveRing::new(curve.h.clone());
    let spec_fn = |f: &CurveFn<Fpq>| -> Result<CurveFn<K>> {
        Ok(ring.elem(spec_rf(&f.a)?, spec_rf(&f.b)?))
    };
    Correspondence::new(
        curve.clone(),
        spec_fn(&fam.f2)?,
        spec_fn(&fam.f1)?,
        spec_fn(&fam.f0)?,
        spec_fn(&fam.y0)?,
        spec_fn(&fam.y1)?,
        5,
    )
}

/// Coordinate change from the model parameters (m, n) to the eigenform
/// coordinates: p = m^2/5 - n^2, q = (m - alpha n)(5n^2 - m^2)(5n^2 - m^2 + 5)/125.
pub fn ek_to_pq(m: &K, n: &K) -> (K, K) {
    let field = disc5_field();
    let five_inv = field.from_i64(5).inv().expect("5 invertible");
    let m2 = m.mul(m);
    let n2 = n.mul(n);
    let p = m2.mul(&five_inv).sub(&n2);
    let w = field.from_i64(5).mul(&n2).sub(&m2);
    let q = m
        .sub(&alpha().mul(n))
        .mul(&w)
        .mul(&w.add(&field.from_i64(5)))
        .mul(&field.from_i64(125).inv().expect("125 invertible"));
    (p, q)
}

/// A marked eigenform zero and the distinguished solution of the section
/// equation on the fiber (z, q): p = 1 - z^2/5, Z = (0, zq),
/// P = (2(1-p), z(8 - 16p + 8p^2 + 5q)/alpha).
#[derive(Clone, Debug)]
pub struct SectionData {
    pub p: K,
    pub q: K,
    pub z: K,
    pub zero_pt: (K, K),
    pub marked_pt: (K, K),
}

pub fn eigenform_zero_section(zv: &Rational, qv: &Rational) -> Result<SectionData> {
    let field = disc5_field();
    let z = field.from_rational(zv.clone());
    let q = field.from_rational(qv.clone());
    if z.is_zero() || q.is_zero() {
        return Err(Error::SingularFiber);
    }
    let five_inv = field.from_i64(5).inv()?;
    let p = field.one().sub(&z.mul(&z).mul(&five_inv));
    let curve = disc5_curve(&p, &q)?;
    let zero_pt = (field.zero(), z.mul(&q));
    // on-curve check for the eigenform zero
    let h0 = curve.h.eval(&zero_pt.0);
    if zero_pt.1.mul(&zero_pt.1) != h0 {
        return Err(Error::Internal("eigenform zero is off the curve".into()));
    }
    let one = field.one();
    let two = field.from_i64(2);
    let tp = two.mul(&one.sub(&p));
    let up_num = field
        .from_i64(8)
        .sub(&field.from_i64(16).mul(&p))
        .add(&field.from_i64(8).mul(&p).mul(&p))
        .add(&field.from_i64(5).mul(&q));
    let up = z.mul(&up_num).mul(&alpha().inv()?);
    let hp = curve.h.eval(&tp);
    if up.mul(&up) != hp {
        return Err(Error::Internal("marked point is off the curve".into()));
    }
    Ok(SectionData {
        p,
        q,
        z,
        zero_pt,
        marked_pt: (tp, up),
    })
}

/// Exact evaluation of the section identity: (P - Z) - T (eta(Z) - Z) = 0 in
/// the Jacobian, with T the fiber correspondence whose eigenvalue on t dt/u
/// is gamma.
pub fn verify_l_gamma(zv: &Rational, qv: &Rational) -> Result<bool> {
    let data = eigenform_zero_section(zv, qv)?;
    verify_l_gamma_at(&data, &data.marked_pt)
}

/// The same identity with an arbitrary marked point (used for the uniqueness
/// check with perturbed points).
pub fn verify_l_gamma_at(data: &SectionData, marked: &(K, K)) -> Result<bool> {
    let corr = disc5_correspondence(&data.p, &data.q)?;
    let curve = &corr.curve;
    let id = |c: &K| c.clone();
    let (zt, zu) = &data.zero_pt;
    // W(eta Z) - W(Z): fibers are affine for q != 0
    let fz = fiber_divisor(&corr, &id, zt, zu)?;
    let fez = fiber_divisor(&corr, &id, zt, &zu.neg())?;
    let wz = MumfordDivisor {
        a: fz.a,
        b: fz.b,
        n_plus: 0,
    };
    let wez = MumfordDivisor {
        a: fez.a,
        b: fez.b,
        n_plus: 0,
    };
    wz.validate(curve)?;
    wez.validate(curve)?;
    let t_diff = cantor_sub(curve, &wez, &wz)?;
    // (P - Z)
    let pcl = point_class(curve, &marked.0, &marked.1);
    let zcl = point_class(curve, zt, zu);
    let pz = cantor_sub(curve, &pcl, &zcl)?;
    let l = cantor_sub(curve, &pz, &t_diff)?;
    Ok(l.is_identity(curve))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ek_coordinate_change() {
        let field = disc5_field();
        let m = field.from_i64(5);
        let n = field.from_i64(1);
        let (p, q) = ek_to_pq(&m, &n);
        assert_eq!(p, field.from_i64(4));
        // q = (5 - alpha)(-20)(-15)/125 = 12(5 - alpha)/5
        let expected = field
            .from_i64(5)
            .sub(&alpha())
            .mul(&field.from_i64(12))
            .mul(&field.from_i64(5).inv().unwrap());
        assert_eq!(q, expected);
        let (p0, q0) = ek_to_pq(&field.zero(), &field.zero());
        assert!(p0.is_zero() && q0.is_zero());
    }

    #[test]
    fn degenerate_fiber_rejected() {
        let field = disc5_field();
        // q = 0: h = t^5 (t + 2p)
        assert!(matches!(
            disc5_curve(&field.from_i64(3), &field.zero()),
            Err(Error::SingularFiber)
        ));
        // generic fiber works
        let c = disc5_curve(&field.from_rational(Rational::from((4, 5))), &field.one());
        assert!(c.is_ok());
    }

    #[test]
    fn section_points_are_on_curve() {
        let d = eigenform_zero_section(&Rational::from(1), &Rational::from(1)).unwrap();
        // p = 4/5
        assert_eq!(
            d.p,
            disc5_field().from_rational(Rational::from((4, 5)))
        );
        let d2 = eigenform_zero_section(&Rational::from(2), &Rational::from(3)).unwrap();
        assert!(!d2.zero_pt.1.is_zero());
    }
}
