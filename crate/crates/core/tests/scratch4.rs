use realmult_core::certify::*;
use realmult_core::corpus;
use std::time::Instant;

#[test]
fn profile_thm4() {
    let t0 = Instant::now();
    let corr = corpus::thm4_correspondence();
    println!("corpus build: {:?}", t0.elapsed());
    let t1 = Instant::now();
    let m = one_form_action(&corr).unwrap();
    println!("one_form_action: {:?} m00={:?}", t1.elapsed(), m[0][0]);
    let t2 = Instant::now();
    let g = cover_genus(&corr).unwrap();
    println!("cover_genus: {:?} g={}", t2.elapsed(), g);
    let t3 = Instant::now();
    let psi = psi_presentation(&corr).unwrap();
    println!("psi_presentation: {:?} deg={:?}", t3.elapsed(), psi.m.degree());
    let t4 = Instant::now();
    let adj = rosati_adjoint_action(&corr);
    println!("rosati: {:?} ok={}", t4.elapsed(), adj.is_ok());
}
