//! Exact certification against the published worked examples.

use realmult_core::certify::{
    certify, cover_genus, deg_psi, implicit_derivative, minimal_polynomial, one_form_action,
    rosati_adjoint_action,
};
use realmult_core::corpus;
use realmult_core::exact::{Field, Poly, RatFunc};

fn qi(corr: &realmult_core::curves::Correspondence<realmult_core::exact::AlgebraicNumber>, n: i64) -> realmult_core::exact::AlgebraicNumber {
    corr.curve.h.ctx().from_i64_like(n)
}

#[test]
fn disc5_worked_example_action_on_one_forms() {
    let corr = corpus::thm1_correspondence();
    let z = corr.curve.h.ctx().clone();
    // dx/dt = -(2tx^2 - 1)/(2t^2 x - 1): check via the defining identity
    // F_x (dx/dt) + F_t = 0 with F = t^2 x^2 - x - t + 1.
    let cover = corr.cover_ring().unwrap();
    let dxdt = implicit_derivative(&corr).unwrap();
    let x = cover.x();
    let t = cover.from_curvefn(corr.ring.t());
    let one = cover.one();
    // F_x = 2 t^2 x - 1, F_t = 2 t x^2 - 1
    let two = cover.from_curvefn(corr.ring.from_ratfunc(RatFunc::constant(z.from_i64_like(2))));
    let f_x = two.mul(&t).mul(&t).mul(&x).sub(&one);
    let f_t = two.mul(&t).mul(&x).mul(&x).sub(&one);
    assert!(f_x.mul(&dxdt).add(&f_t).is_zero());

    // the action on one-forms is [[1, -1], [-1, 0]]
    let m = one_form_action(&corr).unwrap();
    assert_eq!(m[0][0], qi(&corr, 1));
    assert_eq!(m[0][1], qi(&corr, -1));
    assert_eq!(m[1][0], qi(&corr, -1));
    assert_eq!(m[1][1], qi(&corr, 0));

    // trace of x is 1/t^2; the pullback ratio for dt/u traces to 1 - t
    let tr_x = x.trace();
    let expected = corr.ring.from_ratfunc(
        RatFunc::new(Poly::from_i64(&z, &[1]), Poly::from_i64(&z, &[0, 0, 1])).unwrap(),
    );
    assert_eq!(tr_x, expected);
    let y = corr.y_element().unwrap();
    let u = cover.from_curvefn(corr.ring.u());
    let ratio = y.inv().unwrap().mul(&dxdt).mul(&u);
    let tr1 = ratio.trace();
    let lin = corr.ring.from_ratfunc(RatFunc::from_poly(Poly::from_i64(&z, &[1, -1])));
    assert_eq!(tr1, lin);

    // minimal polynomial x^2 - x - 1
    let minp = minimal_polynomial(&m);
    assert_eq!(minp.len(), 3);
    assert_eq!(minp[0], qi(&corr, -1));
    assert_eq!(minp[1], qi(&corr, -1));
    assert_eq!(minp[2], qi(&corr, 1));
}

#[test]
fn disc5_full_certification() {
    let corr = corpus::thm1_correspondence();
    let report = certify(&corr, 5).unwrap();
    assert!(report.rosati_self_adjoint);
    assert_eq!(report.genus_z, 6);
    assert_eq!(report.deg_psi, 2);
    assert_eq!(report.disc_certified, 5);
    assert_eq!(report.verdict(), "CERTIFIED RM by O_5");
}

#[test]
fn rosati_adjoint_matches_on_worked_example() {
    let corr = corpus::thm1_correspondence();
    let m = one_form_action(&corr).unwrap();
    let adj = rosati_adjoint_action(&corr).unwrap();
    assert_eq!(m, adj);
}

#[test]
fn disc12_certifications() {
    let corr2 = corpus::thm2_correspondence();
    let r2 = certify(&corr2, 12).unwrap();
    assert_eq!(r2.genus_z, 12);
    assert_eq!(r2.deg_psi, 5);
    assert!(r2.rosati_self_adjoint);
    // minimal polynomial x^2 - 3
    assert_eq!(r2.min_poly[0], qi(&corr2, -3));
    assert_eq!(r2.min_poly[1], qi(&corr2, 0));

    let corr3 = corpus::thm3_correspondence();
    let r3 = certify(&corr3, 12).unwrap();
    assert_eq!(r3.genus_z, 11);
    assert_eq!(r3.deg_psi, 5);
    assert!(r3.rosati_self_adjoint);
    assert_eq!(r3.min_poly[0], qi(&corr3, -3));
    assert_eq!(r3.min_poly[1], qi(&corr3, 0));
}

#[test]
fn disc8_sextic_certification() {
    let corr = corpus::thm4_correspondence();
    let r = certify(&corr, 8).unwrap();
    assert_eq!(r.genus_z, 11);
    assert_eq!(r.deg_psi, 4);
    assert_eq!(r.min_poly[0], qi(&corr, -2));
    assert_eq!(r.min_poly[1], qi(&corr, 0));
}

#[test]
fn corrupted_y_fails_the_gate() {
    use realmult_core::curves::Correspondence;
    let good = corpus::thm1_correspondence();
    let bad = Correspondence::new(
        good.curve.clone(),
        good.f2.clone(),
        good.f1.clone(),
        good.f0.clone(),
        good.y0.neg(),
        good.y1.clone(),
        5,
    );
    assert!(bad.is_err());
}

#[test]
fn genus_is_unit_invariant() {
    // scaling F by a nonzero element of K(t) leaves the branch count alone
    use realmult_core::curves::Correspondence;
    use realmult_core::exact::RatFunc;
    let corr = corpus::thm1_correspondence();
    let z = corr.curve.h.ctx().clone();
    let unit = corr.ring.from_ratfunc(
        RatFunc::new(
            Poly::from_i64(&z, &[3, 0, 5]),
            Poly::from_i64(&z, &[7, 1]),
        )
        .unwrap(),
    );
    let scaled = Correspondence::new(
        corr.curve.clone(),
        corr.f2.mul(&unit),
        corr.f1.mul(&unit),
        corr.f0.mul(&unit),
        corr.y0.clone(),
        corr.y1.clone(),
        5,
    )
    .unwrap();
    assert_eq!(cover_genus(&scaled).unwrap(), 6);
    assert_eq!(deg_psi(&scaled).unwrap(), 2);
}
