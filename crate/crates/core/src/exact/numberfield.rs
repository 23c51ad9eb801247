//! Number fields K = Q(theta) with a pinned complex embedding, and their
//! elements in the power basis of theta.

use super::field::{Field, FieldSqrt};
use crate::error::{Error, Result};
use crate::prec::Prec;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// K = Q[x]/(min_poly) together with a decimal seed locating the chosen root.
pub struct NumberField {
    /// Monic, irreducible over Q, integer coefficients, ascending.
    min_poly: Vec<Integer>,
    /// Decimal approximation of the chosen root, enough digits to separate roots.
    seed: String,
    name: String,
    root_cache: Mutex<BTreeMap<u32, Complex>>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", self.name)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.seed == other.seed
    }
}

impl NumberField {
    pub fn new(min_poly: Vec<i64>, seed: &str, name: &str) -> Arc<Self> {
        let min_poly: Vec<Integer> = min_poly.into_iter().map(Integer::from).collect();
        assert!(min_poly.last().map(|c| *c == 1).unwrap_or(false), "min_poly must be monic");
        assert!(min_poly.len() >= 2, "min_poly must have degree >= 1");
        Arc::new(NumberField {
            min_poly,
            seed: seed.to_string(),
            name: name.to_string(),
            root_cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn rationals() -> Arc<Self> {
        // K = Q as the degree-1 field Q[x]/(x).
        NumberField::new(vec![0, 1], "0", "Q")
    }

    /// Q(sqrt(d)) for a squarefree integer d, embedded at the positive
    /// (or positive-imaginary) square root.
    pub fn quadratic(d: i64) -> Arc<Self> {
        assert!(d != 0 && d != 1);
        let seed = if d > 0 {
            let s = (d as f64).sqrt();
            format!("{s:.16}")
        } else {
            format!("{:.16}i", ((-d) as f64).sqrt())
        };
        NumberField::new(vec![-d, 0, 1], &seed, &format!("Q(sqrt({d}))"))
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn min_poly_coeffs(&self) -> &[Integer] {
        &self.min_poly
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn seed(&self) -> &str {
        &self.seed
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree() == 1
    }

    fn seed_complex(&self, prec_bits: u32) -> Complex {
        let s = self.seed.trim();
        if let Some(im) = s.strip_suffix('i') {
            let f = Float::with_val(prec_bits, Float::parse(im).expect("bad seed"));
            Complex::with_val(prec_bits, (Float::with_val(prec_bits, 0), f))
        } else {
            let f = Float::with_val(prec_bits, Float::parse(s).expect("bad seed"));
            Complex::with_val(prec_bits, (f, Float::with_val(prec_bits, 0)))
        }
    }

    fn eval_minpoly(&self, z: &Complex, prec_bits: u32) -> (Complex, Complex) {
        let mut v = Complex::with_val(prec_bits, 0);
        let mut dv = Complex::with_val(prec_bits, 0);
        for c in self.min_poly.iter().rev() {
            dv = Complex::with_val(prec_bits, &dv * z) + &v;
            v = Complex::with_val(prec_bits, &v * z) + c;
        }
        (v, dv)
    }

    /// The chosen root theta at the requested precision, refined by Newton
    /// iteration from the seed and cached.
    pub fn root(&self, prec: Prec) -> Complex {
        let bits = prec.bits();
        if self.degree() == 1 {
            // x + c0 = 0 -> theta = -c0 (the rationals use min_poly = x).
            let c0 = &self.min_poly[0];
            return Complex::with_val(bits, (-c0.clone(), Integer::new()));
        }
        {
            let cache = self.root_cache.lock().unwrap();
            if let Some((_, z)) = cache.range(bits..).next() {
                return Complex::with_val(bits, z);
            }
        }
        let mut z = self.seed_complex(bits);
        // Newton: quadratic convergence; iterate until stable at target bits.
        for _ in 0..(64 + bits.ilog2() * 8) {
            let (v, dv) = self.eval_minpoly(&z, bits);
            if dv.is_zero() {
                break;
            }
            let step = Complex::with_val(bits, &v / &dv);
            let done = step.clone().norm().real() < &Float::with_val(64, Float::i_exp(1, -(bits as i32) + 8));
            z -= step;
            if done {
                break;
            }
        }
        let mut cache = self.root_cache.lock().unwrap();
        cache.insert(bits, z.clone());
        z
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraicNumber {
        AlgebraicNumber {
            field: Arc::clone(self),
            coords: vec![Rational::new(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> AlgebraicNumber {
        self.from_i64(1)
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> AlgebraicNumber {
        let mut coords = vec![Rational::new(); self.degree()];
        coords[0] = Rational::from(n);
        AlgebraicNumber {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> AlgebraicNumber {
        let mut coords = vec![Rational::new(); self.degree()];
        coords[0] = q;
        AlgebraicNumber {
            field: Arc::clone(self),
            coords,
        }
    }

    /// The generator theta as a field element (zero for the rationals).
    pub fn gen(self: &Arc<Self>) -> AlgebraicNumber {
        let mut coords = vec![Rational::new(); self.degree()];
        if self.degree() >= 2 {
            coords[1] = Rational::from(1);
        } else {
            coords[0] = Rational::from((-self.min_poly[0].clone(), 1));
        }
        AlgebraicNumber {
            field: Arc::clone(self),
            coords,
        }
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Rational>) -> AlgebraicNumber {
        assert_eq!(coords.len(), self.degree());
        AlgebraicNumber {
            field: Arc::clone(self),
            coords,
        }
    }

    /// Reduce a rational-coefficient polynomial in theta of any degree.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let d = self.degree();
        while v.len() > d {
            let top = v.pop().unwrap();
            if top != 0u32 {
                let k = v.len() - d;
                // theta^d = -(c_{d-1} theta^{d-1} + ... + c_0)
                for i in 0..d {
                    let sub = Rational::from(&top * &self.min_poly[i]);
                    v[k + i] -= sub;
                }
            }
        }
        v.resize(d, Rational::new());
        v
    }
}

/// An element of a number field in the power basis of theta.
#[derive(Clone)]
pub struct AlgebraicNumber {
    field: Arc<NumberField>,
    coords: Vec<Rational>,
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            write!(f, "{:?}@{}", self.coords, self.field.name)
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.coords == other.coords
    }
}

impl AlgebraicNumber {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn assert_same(&self, other: &Self) {
        assert!(self.same_field(other), "mixed number fields");
    }

    /// Is this element a rational number (coordinates above degree 0 vanish)?
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coords.iter().skip(1).all(|c| *c == 0u32) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn from_parts(field: &Arc<NumberField>, coords: Vec<Rational>) -> Self {
        field.element(coords)
    }

    /// Numeric value under the pinned embedding.
    pub fn embed(&self, prec: Prec) -> Complex {
        let bits = prec.bits();
        if let Some(q) = self.as_rational() {
            return Complex::with_val(bits, (Float::with_val(bits, q), Float::new(bits)));
        }
        let theta = self.field.root(prec);
        let mut acc = Complex::with_val(bits, 0);
        for c in self.coords.iter().rev() {
            acc = acc * &theta + Float::with_val(bits, c);
        }
        acc
    }

    /// Galois conjugate for quadratic fields: a + b*theta -> a + b*theta',
    /// using theta' = -c1 - theta for x^2 + c1 x + c0.
    pub fn conjugate(&self) -> Result<Self> {
        match self.field.degree() {
            1 => Ok(self.clone()),
            2 => {
                let c1 = Rational::from(&self.field.min_poly[1]);
                let a = &self.coords[0];
                let b = &self.coords[1];
                let new0 = Rational::from(a - Rational::from(b * &c1));
                let new1 = Rational::from(-b.clone());
                Ok(self.field.element(vec![new0, new1]))
            }
            _ => Err(Error::Unsupported("conjugate for degree > 2".into())),
        }
    }

    /// Max of |numerator|, |denominator| over the coordinates (height proxy).
    pub fn height(&self) -> Integer {
        let mut h = Integer::from(1);
        for c in &self.coords {
            h = h.max(c.numer().clone().abs());
            h = h.max(c.denom().clone());
        }
        h
    }
}

impl Field for AlgebraicNumber {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }

    fn one_like(&self) -> Self {
        self.field.one()
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == 0u32)
    }

    fn add(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| Rational::from(a + b))
            .collect();
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| Rational::from(a - b))
            .collect();
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn neg(&self) -> Self {
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|a| Rational::from(-a.clone())).collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.assert_same(rhs);
        let d = self.field.degree();
        let mut v = vec![Rational::new(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if *a == 0u32 {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if *b == 0u32 {
                    continue;
                }
                v[i + j] += Rational::from(a * b);
            }
        }
        AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords: self.field.reduce(v),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("algebraic number inverse"));
        }
        let d = self.field.degree();
        if d == 1 {
            return Ok(self
                .field
                .from_rational(Rational::from(self.coords[0].clone().recip())));
        }
        // Extended Euclid in Q[x] against the minimal polynomial.
        let minp: Vec<Rational> = self
            .field
            .min_poly
            .iter()
            .map(|c| Rational::from(c))
            .collect();
        let (g, _, t) = rat_poly_xgcd(&minp, &self.coords);
        // g must be a nonzero constant (min_poly irreducible).
        if g.len() != 1 || g[0] == 0u32 {
            return Err(Error::Internal("min_poly not coprime to element".into()));
        }
        let ginv = Rational::from(g[0].clone().recip());
        let mut coords: Vec<Rational> = t.into_iter().map(|c| c * &ginv).collect();
        coords.resize(d, Rational::new());
        Ok(AlgebraicNumber {
            field: Arc::clone(&self.field),
            coords: self.field.reduce(coords),
        })
    }

    fn from_i64_like(&self, n: i64) -> Self {
        self.field.from_i64(n)
    }

    fn content_scale(v: &[Self]) -> Option<Self> {
        // common scale L/G: L = lcm of denominators, G = gcd of numerators
        let mut g = Integer::new();
        let mut l = Integer::from(1);
        let mut field = None;
        for e in v.iter() {
            for c in &e.coords {
                if *c != 0u32 {
                    g = g.gcd(c.numer());
                    l = l.lcm(c.denom());
                    field = Some(Arc::clone(&e.field));
                }
            }
        }
        let field = field?;
        if g == 0 || (g == 1 && l == 1) {
            return None;
        }
        Some(field.from_rational(Rational::from((l, g))))
    }
}

impl FieldSqrt for AlgebraicNumber {
    fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        match self.field.degree() {
            1 => rational_sqrt(&self.coords[0]).map(|r| self.field.from_rational(r)),
            2 => {
                // Solve (x + y theta)^2 = a + b theta with theta^2 = -c1 theta - c0.
                // x^2 + y^2 theta^2 + 2xy theta = a + b theta
                // => x^2 - c0 y^2 = a   and   2xy - c1 y^2 = b.
                let c0 = Rational::from(&self.field.min_poly[0]);
                let c1 = Rational::from(&self.field.min_poly[1]);
                let a = self.coords[0].clone();
                let b = self.coords[1].clone();
                if b == 0u32 {
                    // y = 0, x^2 = a; or x = c1 y / 2, then substitute.
                    if let Some(x) = rational_sqrt(&a) {
                        return Some(self.field.element(vec![x, Rational::new()]));
                    }
                    // x = c1 y / 2: (c1^2/4 - c0) y^2 = a and y(2x - c1 y) = ... b=0 needs 2xy = c1 y^2.
                    let disc = Rational::from(&c1 * &c1) / Rational::from(4) - c0.clone();
                    if disc != 0u32 {
                        let ratio = a / disc;
                        if let Some(y) = rational_sqrt(&ratio) {
                            let x = Rational::from(&c1 * &y) / Rational::from(2);
                            let cand = self.field.element(vec![x, y]);
                            if cand.mul(&cand) == *self {
                                return Some(cand);
                            }
                        }
                    }
                    None
                } else {
                    // y != 0: x = (b + c1 y^2) / (2 y); substitute into
                    // x^2 - c0 y^2 = a and clear: quadratic in y^2.
                    // (b + c1 Y)^2 / (4 Y) - c0 Y = a  with Y = y^2
                    // => (c1^2 - 4 c0) Y^2 + (2 b c1 - 4 a) Y + b^2 = 0.
                    let qa = Rational::from(&c1 * &c1) - Rational::from(4) * c0.clone();
                    let qb = Rational::from(2) * Rational::from(&b * &c1) - Rational::from(4) * a.clone();
                    let qc = Rational::from(&b * &b);
                    for y2 in solve_rational_quadratic(&qa, &qb, &qc) {
                        if y2 <= 0u32 {
                            // y may still be rational only if y2 is a positive square
                            // (y rational, y^2 >= 0); skip negatives.
                            if y2 != 0u32 {
                                continue;
                            }
                        }
                        if let Some(y) = rational_sqrt(&y2) {
                            if y == 0u32 {
                                continue;
                            }
                            let x = (b.clone() + Rational::from(&c1 * &y2)) / (Rational::from(2) * y.clone());
                            let cand = self.field.element(vec![x, y]);
                            if cand.mul(&cand) == *self {
                                return Some(cand);
                            }
                        }
                    }
                    None
                }
            }
            _ => None,
        }
    }
}

/// sqrt of a rational if it is a perfect square (nonnegative).
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if *q < 0u32 {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if !n.is_perfect_square() || !d.is_perfect_square() {
        return None;
    }
    Some(Rational::from((
        n.clone().sqrt(),
        d.clone().sqrt(),
    )))
}

/// Rational roots of qa Y^2 + qb Y + qc = 0 (qa may be zero).
fn solve_rational_quadratic(qa: &Rational, qb: &Rational, qc: &Rational) -> Vec<Rational> {
    if *qa == 0u32 {
        if *qb == 0u32 {
            return vec![];
        }
        return vec![Rational::from(-qc.clone() / qb.clone())];
    }
    let disc = Rational::from(qb * qb) - Rational::from(4) * Rational::from(qa * qc);
    match rational_sqrt(&disc) {
        None => vec![],
        Some(r) => {
            let two_a = Rational::from(2) * qa.clone();
            let r1 = (Rational::from(-qb.clone()) + r.clone()) / two_a.clone();
            let r2 = (Rational::from(-qb.clone()) - r) / two_a;
            if r1 == r2 {
                vec![r1]
            } else {
                vec![r1, r2]
            }
        }
    }
}

/// Extended gcd for rational-coefficient polynomials given as coefficient
/// vectors (ascending); returns (g, s, t) with s*a + t*b = g.
fn rat_poly_xgcd(
    a: &[Rational],
    b: &[Rational],
) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
        while v.last().map(|c| *c == 0u32).unwrap_or(false) {
            v.pop();
        }
        v
    }
    fn sub_scaled(a: &[Rational], b: &[Rational], c: &Rational, k: usize) -> Vec<Rational> {
        let n = a.len().max(b.len() + k);
        let mut out = vec![Rational::new(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] = x.clone();
        }
        for (i, x) in b.iter().enumerate() {
            out[i + k] -= Rational::from(x * c);
        }
        trim(out)
    }
    fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = a.to_vec();
        rem = trim(rem);
        let db = b.len() - 1;
        let mut quo = vec![Rational::new(); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let da = rem.len() - 1;
            let c = Rational::from(rem.last().unwrap() / b.last().unwrap());
            quo[da - db] = c.clone();
            rem = sub_scaled(&rem, b, &c, da - db);
        }
        (trim(quo), rem)
    }
    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![Rational::new(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += Rational::from(x * y);
            }
        }
        trim(out)
    }
    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out = vec![Rational::new(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] = x.clone();
        }
        for (i, y) in b.iter().enumerate() {
            out[i] -= y;
        }
        trim(out)
    }

    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0 = vec![Rational::from(1)];
    let mut s1: Vec<Rational> = vec![];
    let mut t0: Vec<Rational> = vec![];
    let mut t1 = vec![Rational::from(1)];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let ns = sub(&s0, &mul(&q, &s1));
        let nt = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_field_arithmetic() {
        let k = NumberField::quadratic(5);
        let sqrt5 = k.gen();
        assert_eq!(sqrt5.mul(&sqrt5), k.from_i64(5));
        let phi = k
            .element(vec![Rational::from((1, 2)), Rational::from((1, 2))]);
        // phi^2 = phi + 1
        assert_eq!(phi.mul(&phi), phi.add(&k.one()));
        let inv = phi.inv().unwrap();
        assert_eq!(phi.mul(&inv), k.one());
        // 1/phi = phi - 1
        assert_eq!(inv, phi.sub(&k.one()));
    }

    #[test]
    fn embedding_is_consistent() {
        let k = NumberField::quadratic(5);
        let phi = k.element(vec![Rational::from((1, 2)), Rational::from((1, 2))]);
        let p = Prec(120);
        let z = phi.embed(p);
        // phi ~ 1.618...
        let f = z.real().to_f64();
        assert!((f - 1.6180339887498949).abs() < 1e-12);
        // ring homomorphism check
        let a = k.element(vec![Rational::from((3, 7)), Rational::from((-2, 5))]);
        let b = k.element(vec![Rational::from((1, 3)), Rational::from((4, 9))]);
        let lhs = a.mul(&b).embed(p);
        let rhs = a.embed(p) * b.embed(p);
        let diff = Complex::with_val(p.bits(), &lhs - &rhs).norm();
        assert!(diff.real().to_f64() < 1e-100);
    }

    #[test]
    fn sqrt_in_quadratic_field() {
        let k = NumberField::quadratic(5);
        // (2 + sqrt5)^2 = 9 + 4 sqrt5
        let x = k.element(vec![Rational::from(9), Rational::from(4)]);
        let r = x.sqrt_in_field().unwrap();
        assert_eq!(r.mul(&r), x);
        // 5 is a square (sqrt5 itself)
        let five = k.from_i64(5);
        let r5 = five.sqrt_in_field().unwrap();
        assert_eq!(r5.mul(&r5), five);
        // 2 is not a square in Q(sqrt5)
        assert!(k.from_i64(2).sqrt_in_field().is_none());
        // 3 is not
        assert!(k.from_i64(3).sqrt_in_field().is_none());
    }

    #[test]
    fn rationals_sqrt() {
        let q = NumberField::rationals();
        let x = q.from_rational(Rational::from((49, 9)));
        let r = x.sqrt_in_field().unwrap();
        assert_eq!(r, q.from_rational(Rational::from((7, 3))));
        assert!(q.from_i64(2).sqrt_in_field().is_none());
    }
}
