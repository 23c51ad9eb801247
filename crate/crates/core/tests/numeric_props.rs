//! Numeric property suite, fast tier (100 digits). The full 400-digit tier
//! runs inside the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use realmult_core::analytic::mpc::cabs;
use realmult_core::analytic::{
    abel_jacobi, aj_inverse, period_matrix, reduce_mod_lattice, riemann_residual, AJVector,
    LatticeCtx,
};
use realmult_core::corpus;
use realmult_core::prec::Prec;
use rug::ops::Pow;
use rug::{Complex, Float};

fn tol(bits: u32, exp10: i64) -> Float {
    Float::with_val(bits, 10).pow(exp10 as i32)
}

#[test]
fn riemann_relations_hold_at_100_digits() {
    let prec = Prec(100);
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let resid = riemann_residual(&pd);
    assert!(
        resid < tol(prec.bits(), -80),
        "residual too large: {:e}",
        resid.to_f64()
    );
}

#[test]
fn riemann_relations_hold_for_sextic() {
    let prec = Prec(100);
    let curve = corpus::thm4_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let resid = riemann_residual(&pd);
    assert!(
        resid < tol(prec.bits(), -80),
        "residual too large: {:e}",
        resid.to_f64()
    );
}

#[test]
fn aj_of_base_point_is_zero_and_involution_negates() {
    let prec = Prec(100);
    let bits = prec.bits();
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let lattice = LatticeCtx::new(&pd);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let re = rng.gen_range(-3.0f64..3.0);
        let im = rng.gen_range(-3.0f64..3.0);
        let t = Complex::with_val(bits, (re, im));
        let u = realmult_core::analytic::mpc::poly_eval(&pd.numerics.h, &t).sqrt();
        let aj_p = abel_jacobi(&pd, &t, &u).unwrap();
        let aj_eta = abel_jacobi(&pd, &t, &Complex::with_val(bits, -u.clone())).unwrap();
        let sum = lattice.reduce(&aj_p.add(&aj_eta));
        assert!(
            sum.norm() < tol(bits, -45),
            "AJ(P) + AJ(eta P) not in the lattice: {:e}",
            sum.norm().to_f64()
        );
    }
}

#[test]
fn weierstrass_points_are_two_torsion() {
    let prec = Prec(100);
    let bits = prec.bits();
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let lattice = LatticeCtx::new(&pd);
    // a finite branch point is a Weierstrass point: 2 AJ(w) = 0 mod lattice
    let w = pd.numerics.branch_points[0].clone();
    let zero = Complex::with_val(bits, 0);
    let aj_w = abel_jacobi(&pd, &w, &zero).unwrap();
    let doubled = lattice.reduce(&aj_w.scale_i(2));
    assert!(
        doubled.norm() < tol(bits, -40),
        "2 AJ(w) not in the lattice: {:e}",
        doubled.norm().to_f64()
    );
}

#[test]
fn lattice_reduction_is_translation_invariant() {
    let prec = Prec(100);
    let bits = prec.bits();
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let lattice = LatticeCtx::new(&pd);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let v = AJVector {
            v: [
                Complex::with_val(bits, (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))),
                Complex::with_val(bits, (rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))),
            ],
            prec,
        };
        let mut w = v.clone();
        for j in 0..4 {
            let k = rng.gen_range(-3i64..=3);
            if k != 0 {
                w.v[0] += Complex::with_val(bits, &pd.pi[0][j] * k as i32);
                w.v[1] += Complex::with_val(bits, &pd.pi[1][j] * k as i32);
            }
        }
        let rv = lattice.reduce(&v);
        let rw = lattice.reduce(&w);
        let d = rv.sub(&rw);
        assert!(d.norm() < tol(bits, -60));
        // idempotence
        let rr = lattice.reduce(&rv);
        assert!(rr.sub(&rv).norm() < tol(bits, -60));
        // a lattice column reduces to zero
        let col = AJVector {
            v: [pd.pi[0][2].clone(), pd.pi[1][2].clone()],
            prec,
        };
        assert!(lattice.reduce(&col).norm() < tol(bits, -60));
    }
}

#[test]
fn aj_inverse_round_trip() {
    let prec = Prec(100);
    let bits = prec.bits();
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let lattice = LatticeCtx::new(&pd);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for round in 0..3 {
        let mk = |rng: &mut ChaCha8Rng| {
            let re = rng.gen_range(-2.5f64..2.5);
            let im = rng.gen_range(-2.5f64..2.5);
            let t = Complex::with_val(bits, (re, im));
            let u = realmult_core::analytic::mpc::poly_eval(&pd.numerics.h, &t).sqrt();
            (t, u)
        };
        let (tq, uq) = mk(&mut rng);
        let (tr, ur) = mk(&mut rng);
        let v = abel_jacobi(&pd, &tq, &uq)
            .unwrap()
            .add(&abel_jacobi(&pd, &tr, &ur).unwrap());
        let pair = aj_inverse(&pd, &v, 1000 + round).unwrap();
        let back = abel_jacobi(&pd, &pair[0].0, &pair[0].1)
            .unwrap()
            .add(&abel_jacobi(&pd, &pair[1].0, &pair[1].1).unwrap());
        let resid = lattice.reduce(&back.sub(&v));
        assert!(
            resid.norm() < tol(bits, -50),
            "round trip residual {:e}",
            resid.norm().to_f64()
        );
        // the recovered pair is the original unordered pair
        let direct = {
            let d1 = cabs(&Complex::with_val(bits, &pair[0].0 - &tq))
                .max(&cabs(&Complex::with_val(bits, &pair[1].0 - &tr)));
            let d2 = cabs(&Complex::with_val(bits, &pair[0].0 - &tr))
                .max(&cabs(&Complex::with_val(bits, &pair[1].0 - &tq)));
            if d1 < d2 {
                d1
            } else {
                d2
            }
        };
        assert!(
            direct < tol(bits, -40),
            "inverse returned a different fiber: {:e}",
            direct.to_f64()
        );
    }
}

#[test]
fn zero_vector_has_no_unique_fiber() {
    let prec = Prec(100);
    let curve = corpus::thm1_curve();
    let pd = period_matrix(&curve, prec).unwrap();
    let v = AJVector::zero(prec);
    assert!(matches!(
        aj_inverse(&pd, &v, 0),
        Err(realmult_core::Error::NonUniqueFiber)
    ));
}
