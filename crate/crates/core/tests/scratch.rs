use realmult_core::analytic::quadrature::gauss_legendre;
use rug::ops::Pow;
use rug::Float;

#[test]
fn debug_gl() {
    let bits = 400u32;
    let (nodes, weights) = &*gauss_legendre(12, bits);
    for k in 0..12 {
        println!("x[{k}] = {:+.17}  w = {:.17}", nodes[k].to_f64(), weights[k].to_f64());
    }
    let mut s = Float::with_val(bits, 0);
    for (x, w) in nodes.iter().zip(weights) {
        s += Float::with_val(bits, x.clone().pow(4u32)) * w;
    }
    println!("sum x^4*w = {:.30}", s.to_f64());
    let mut t = Float::with_val(bits, 0);
    for w in weights.iter() { t += w; }
    println!("sum w = {:.30}", t.to_f64());
}
