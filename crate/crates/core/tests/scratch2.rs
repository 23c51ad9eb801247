use realmult_core::corpus;
use realmult_core::certify::implicit_derivative;
use realmult_core::exact::{Field, RatFunc, Poly};

#[test]
fn debug_dxdt() {
    let corr = corpus::thm1_correspondence();
    let z = corr.curve.h.ctx().clone();
    let cover = corr.cover_ring().unwrap();
    println!("s1 = {:?}", cover.s1);
    println!("s0 = {:?}", cover.s0);
    println!("s1' = {:?}", cover.s1.derivative());
    println!("s0' = {:?}", cover.s0.derivative());
    let dxdt = implicit_derivative(&corr).unwrap();
    println!("dxdt c0 = {:?}", dxdt.c0);
    println!("dxdt c1 = {:?}", dxdt.c1);
    // expected: -(2tx^2-1)/(2t^2x-1) as element; check F_x dxdt = -F_t
    let x = cover.x();
    let t = cover.from_curvefn(corr.ring.t());
    let one = cover.one();
    let two = cover.from_curvefn(corr.ring.from_ratfunc(RatFunc::constant(z.from_i64_like(2))));
    let f_x = two.mul(&t).mul(&t).mul(&x).sub(&one);
    let f_t = two.mul(&t).mul(&x).mul(&x).sub(&one);
    println!("f_x = {:?} | {:?}", f_x.c0, f_x.c1);
    println!("f_t = {:?} | {:?}", f_t.c0, f_t.c1);
    let lhs = f_x.mul(&dxdt);
    println!("f_x*dxdt = {:?} | {:?}", lhs.c0, lhs.c1);
    let _ = Poly::<realmult_core::exact::AlgebraicNumber>::zero(&z);
}
