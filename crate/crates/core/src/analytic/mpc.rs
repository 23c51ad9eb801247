//! Small helpers over rug's arbitrary-precision complex numbers.

use crate::exact::{AlgebraicNumber, Poly};
use crate::prec::Prec;
use rug::ops::Pow;
use rug::{Complex, Float};

pub fn c_zero(bits: u32) -> Complex {
    Complex::with_val(bits, 0)
}

pub fn c_from_f64(bits: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(bits, (re, im))
}

pub fn cabs(z: &Complex) -> Float {
    let p = z.prec().0;
    Float::with_val(p, z.clone().abs().real())
}

pub fn cdist(a: &Complex, b: &Complex) -> Float {
    let p = a.prec().0;
    cabs(&Complex::with_val(p, a - b))
}

/// Horner evaluation of a complex-coefficient polynomial (ascending).
pub fn poly_eval(coeffs: &[Complex], z: &Complex) -> Complex {
    let bits = z.prec().0;
    let mut acc = Complex::with_val(bits, 0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Value and derivative in one pass.
pub fn poly_eval_d(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let bits = z.prec().0;
    let mut v = Complex::with_val(bits, 0);
    let mut dv = Complex::with_val(bits, 0);
    for c in coeffs.iter().rev() {
        dv = dv * z + &v;
        v = v * z + c;
    }
    (v, dv)
}

/// Embed an exact polynomial's coefficients at the working precision.
pub fn embed_poly(p: &Poly<AlgebraicNumber>, prec: Prec) -> Vec<Complex> {
    p.coeffs().iter().map(|c| c.embed(prec)).collect()
}

/// 10^e as a Float at the given bits.
pub fn pow10(bits: u32, e: i64) -> Float {
    Float::with_val(bits, 10).pow(e as i32)
}

/// sqrt branch continuation: the square root of `hv` closest to `prev`.
pub fn sqrt_matched(hv: &Complex, prev: &Complex) -> Complex {
    let bits = hv.prec().0;
    let r = hv.clone().sqrt();
    let d_plus = cdist(&r, prev);
    let d_minus = cdist(&Complex::with_val(bits, -r.clone()), prev);
    if d_minus < d_plus {
        -r
    } else {
        r
    }
}

pub type C2 = [Complex; 2];
pub type CMat2 = [[Complex; 2]; 2];
/// 2 x 4 period matrix.
pub type CMat24 = [[Complex; 4]; 2];

pub fn mat2_mul_vec(m: &CMat2, v: &C2) -> C2 {
    let bits = v[0].prec().0;
    [
        Complex::with_val(bits, &m[0][0] * &v[0]) + Complex::with_val(bits, &m[0][1] * &v[1]),
        Complex::with_val(bits, &m[1][0] * &v[0]) + Complex::with_val(bits, &m[1][1] * &v[1]),
    ]
}

pub fn mat2_mul(a: &CMat2, b: &CMat2) -> CMat2 {
    let bits = a[0][0].prec().0;
    let mut out = [
        [c_zero(bits), c_zero(bits)],
        [c_zero(bits), c_zero(bits)],
    ];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = c_zero(bits);
            for k in 0..2 {
                s += Complex::with_val(bits, &a[i][k] * &b[k][j]);
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn mat2_inv(m: &CMat2) -> Option<CMat2> {
    let bits = m[0][0].prec().0;
    let det = Complex::with_val(bits, &m[0][0] * &m[1][1])
        - Complex::with_val(bits, &m[0][1] * &m[1][0]);
    if det.is_zero() {
        return None;
    }
    let di = Complex::with_val(bits, 1) / det;
    Some([
        [
            Complex::with_val(bits, &m[1][1] * &di),
            Complex::with_val(bits, -(Complex::with_val(bits, &m[0][1] * &di))),
        ],
        [
            Complex::with_val(bits, -(Complex::with_val(bits, &m[1][0] * &di))),
            Complex::with_val(bits, &m[0][0] * &di),
        ],
    ])
}

/// Max |entry| of a 2x2.
pub fn mat2_norm(m: &CMat2) -> Float {
    let bits = m[0][0].prec().0;
    let mut best = Float::with_val(bits, 0);
    for row in m {
        for e in row {
            let a = cabs(e);
            if a > best {
                best = a;
            }
        }
    }
    best
}
