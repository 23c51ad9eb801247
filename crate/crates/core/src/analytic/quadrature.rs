//! Gauss-Legendre quadrature at arbitrary precision, with a global node
//! cache keyed by (order, bits).

use rug::ops::Pow;
use rug::Float;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type NodeSet = Arc<(Vec<Float>, Vec<Float>)>;

fn cache() -> &'static Mutex<HashMap<(usize, u32), NodeSet>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), NodeSet>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Legendre P_n and P_n' at x by the three-term recurrence.
fn legendre_pd(n: usize, x: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = Float::with_val(bits, x);
    if n == 0 {
        return (p0, Float::with_val(bits, 0));
    }
    for k in 1..n {
        // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
        let a = Float::with_val(bits, (2 * k + 1) as u32) * x * &p1;
        let b = Float::with_val(bits, k as u32) * &p0;
        let p2 = (a - b) / Float::with_val(bits, (k + 1) as u32);
        p0 = p1;
        p1 = p2;
    }
    // P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = Float::with_val(bits, n as u32) * (Float::with_val(bits, x * &p1) - &p0);
    let den = Float::with_val(bits, x * x) - 1u32;
    (p1, num / den)
}

/// Nodes and weights on [-1, 1], cached.
pub fn gauss_legendre(n: usize, bits: u32) -> NodeSet {
    if let Some(ns) = cache().lock().unwrap().get(&(n, bits)) {
        return Arc::clone(ns);
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let half = n.div_ceil(2);
    for k in 0..half {
        // seed, then Newton with precision doubling
        let seed = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(96, seed);
        let mut b = 96u32;
        loop {
            b = (b * 2).min(bits + 32);
            x = Float::with_val(b, x);
            // a couple of Newton steps at each precision tier
            for _ in 0..4 {
                let (p, dp) = legendre_pd(n, &x, b);
                let step = p / dp;
                x -= step;
            }
            if b >= bits + 32 {
                break;
            }
        }
        let x = Float::with_val(bits, x);
        let (_, dp) = legendre_pd(n, &x, bits);
        let w = Float::with_val(bits, 2)
            / ((Float::with_val(bits, 1) - Float::with_val(bits, &x * &x))
                * Float::with_val(bits, &dp * &dp));
        nodes.push(x);
        weights.push(w);
    }
    // mirror to the other half
    let mut all_nodes = Vec::with_capacity(n);
    let mut all_weights = Vec::with_capacity(n);
    for k in 0..n {
        if k < half {
            all_nodes.push(-nodes[k].clone());
            all_weights.push(weights[k].clone());
        } else {
            let m = n - 1 - k;
            all_nodes.push(nodes[m].clone());
            all_weights.push(weights[m].clone());
        }
    }
    let ns: NodeSet = Arc::new((all_nodes, all_weights));
    cache().lock().unwrap().insert((n, bits), Arc::clone(&ns));
    ns
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let bits = 400u32;
        let (nodes, weights) = &*gauss_legendre(12, bits);
        // integral of x^4 over [-1, 1] = 2/5
        let mut s = Float::with_val(bits, 0);
        for (x, w) in nodes.iter().zip(weights) {
            s += Float::with_val(bits, x.clone().pow(4)) * w;
        }
        let exact = Float::with_val(bits, rug::Rational::from((2, 5)));
        let err = (s - exact).abs();
        assert!(err.to_f64() < 1e-90);
        // weights sum to 2
        let (nodes2, weights2) = &*gauss_legendre(37, bits);
        let mut t = Float::with_val(bits, 0);
        for w in weights2 {
            t += w;
        }
        assert!((t - 2u32).abs().to_f64() < 1e-90);
        assert_eq!(nodes2.len(), 37);
        let _ = nodes;
    }
}
