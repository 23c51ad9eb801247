use realmult_core::corpus;
use realmult_core::curves::{apply_endo, cantor_add, cantor_sub, point_class};
use realmult_core::exact::{Field, TowerField};
use realmult_core::prec::Prec;

#[test]
fn minpoly_on_divisors() {
    let corr = corpus::thm1_correspondence();
    let k = corr.curve.h.ctx().field().clone();
    let base = TowerField::base(&k);
    let curve_t = corr.curve.map(&|c| base.from_algebraic(c));
    // D = [(1,1) - inf]
    let t0 = base.zero().from_i64_like(1);
    let u0 = base.zero().from_i64_like(1);
    let d = point_class(&curve_t, &t0, &u0);
    let prec = Prec(80);
    let td = apply_endo(&corr, &base, &d, prec, 7).unwrap();
    let ttd = apply_endo(&corr, &base, &td, prec, 8).unwrap();
    let curve2 = curve_t.clone();
    // x^2 - x - 1: T^2 D - T D - D
    let e1 = cantor_sub(&curve2, &cantor_sub(&curve2, &ttd, &td).unwrap(), &d).unwrap();
    // x^2 + x - 1: T^2 D + T D - D
    let e2 = cantor_sub(&curve2, &cantor_add(&curve2, &ttd, &td).unwrap(), &d).unwrap();
    println!("T^2-T-1 kills D: {}", e1.is_identity(&curve2));
    println!("T^2+T-1 kills D: {}", e2.is_identity(&curve2));
    // also print T(D) to compare with the known fiber {(0,1),(1,-1)}
    println!("T(D) = a: {:?} b: {:?}", td.a, td.b);
}
