//! Dense univariate polynomials over any `Field`.

use super::field::Field;
use crate::error::{Error, Result};

/// Polynomial with ascending coefficients and no trailing zeros.
/// A context element (a zero of the coefficient field) is kept so the zero
/// polynomial still knows its parent.
#[derive(Clone, Debug)]
pub struct Poly<F: Field> {
    zero: F,
    coeffs: Vec<F>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F, coeffs: Vec<F>) -> Self {
        let mut p = Poly {
            zero: ctx.zero_like(),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn zero(ctx: &F) -> Self {
        Poly {
            zero: ctx.zero_like(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &F) -> Self {
        Poly::constant(ctx.one_like())
    }

    pub fn constant(c: F) -> Self {
        let zero = c.zero_like();
        let coeffs = if c.is_zero() { vec![] } else { vec![c] };
        Poly { zero, coeffs }
    }

    /// The monomial t.
    pub fn var(ctx: &F) -> Self {
        Poly {
            zero: ctx.zero_like(),
            coeffs: vec![ctx.zero_like(), ctx.one_like()],
        }
    }

    pub fn from_i64(ctx: &F, cs: &[i64]) -> Self {
        Poly::new(ctx, cs.iter().map(|&c| ctx.from_i64_like(c)).collect())
    }

    fn normalize(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn ctx(&self) -> &F {
        &self.zero
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with deg 0 for nonzero constants; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree as i64 with deg(0) = -1, convenient for bounds arithmetic.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        Poly::new(&self.zero, out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            zero: self.zero.clone(),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.zero);
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.zero, out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(
            &self.zero,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.zero.clone(); k];
        out.extend(self.coeffs.iter().cloned());
        Poly {
            zero: self.zero.clone(),
            coeffs: out,
        }
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = self.zero.clone();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.zero);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&self.zero.from_i64_like(i as i64)));
        }
        Poly::new(&self.zero, out)
    }

    /// Euclidean division; fails only if rhs is zero.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero("poly div_rem"));
        }
        let mut rem = self.clone();
        let dr = rhs.degree().unwrap();
        let lead_inv = rhs.leading().inv()?;
        let mut quo = vec![self.zero.clone(); self.coeffs.len().saturating_sub(dr)];
        while let Some(dn) = rem.degree() {
            if dn < dr {
                break;
            }
            let c = rem.leading().mul(&lead_inv);
            let k = dn - dr;
            quo[k] = quo[k].add(&c);
            // rem -= c * t^k * rhs
            let sub = rhs.scale(&c).shift(k);
            rem = rem.sub(&sub);
            debug_assert!(rem.deg_i() < dn as i64);
        }
        Ok((Poly::new(&self.zero, quo), rem))
    }

    pub fn rem(&self, rhs: &Self) -> Result<Self> {
        Ok(self.div_rem(rhs)?.1)
    }

    /// Exact quotient; error if the division leaves a remainder.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(rhs)?;
        if !r.is_zero() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let li = self.leading().inv()?;
        Ok(self.scale(&li))
    }

    /// Rescale by a common scalar to keep coefficients small (no-op for
    /// fields without a notion of content).
    pub fn strip_content(&mut self) {
        F::strip_content_slice(&mut self.coeffs);
    }

    /// Fraction-free pseudo-remainder: lc(b)^k * self mod b computed with
    /// multiplications only. Keeps expensive coefficient fields (towers,
    /// function fields) out of the division lane.
    pub fn pseudo_rem(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero("pseudo remainder"));
        }
        let db = rhs.degree().unwrap();
        let d = rhs.leading();
        let mut r = self.clone();
        let mut guard = 0;
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            guard += 1;
            if guard > self.coeffs.len() + 4 {
                return Err(Error::Internal("pseudo division ran away".into()));
            }
            let lead = r.leading();
            r = r.scale(&d).sub(&rhs.scale(&lead).shift(dr - db));
            debug_assert!(r.deg_i() < dr as i64);
        }
        Ok(r)
    }

    /// Monic gcd via the primitive pseudo-remainder sequence with content
    /// stripping between steps.
    pub fn gcd(&self, rhs: &Self) -> Result<Self> {
        let mut a = self.clone();
        a.strip_content();
        let mut b = rhs.clone();
        b.strip_content();
        while !b.is_zero() {
            let mut r = a.pseudo_rem(&b)?;
            r.strip_content();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*rhs = g, g monic (or zero).
    pub fn xgcd(&self, rhs: &Self) -> Result<(Self, Self, Self)> {
        let zero = Poly::zero(&self.zero);
        let one = Poly::one(&self.zero);
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero.clone(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let li = r0.leading().inv()?;
        Ok((r0.scale(&li), s0.scale(&li), t0.scale(&li)))
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let g = self.gcd(&self.derivative())?;
        Ok(g.degree() == Some(0))
    }

    /// Yun's squarefree decomposition: returns [(s_1,1), (s_2,2), ...] with
    /// self = lc * prod s_k^k, each s_k monic squarefree, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("squarefree of zero"));
        }
        let f = self.monic()?;
        if f.degree() == Some(0) {
            return Ok(vec![]);
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp)?;
        let mut b = f.div_exact(&a0)?;
        let mut c = fp.div_exact(&a0)?;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut k = 1usize;
        loop {
            let a = b.gcd(&d)?;
            if a.degree().map(|d| d > 0).unwrap_or(false) {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a)?;
            if b.degree() == Some(0) {
                break;
            }
            c = d.div_exact(&a)?;
            d = c.sub(&b.derivative());
            k += 1;
        }
        Ok(out)
    }

    /// Squarefree part (product of the distinct monic irreducible factors).
    pub fn squarefree_part(&self) -> Result<Self> {
        let f = self.monic()?;
        if f.is_zero() {
            return Ok(f);
        }
        let g = f.gcd(&f.derivative())?;
        f.div_exact(&g)?.monic()
    }

    /// Writes self = lc * s^2 with s monic, if the monic part is a perfect
    /// square; returns (s, lc). The caller decides whether lc has a square
    /// root in its field.
    pub fn sqrt_monic_part(&self) -> Option<(Self, F)> {
        if self.is_zero() {
            return Some((self.clone(), self.zero.one_like()));
        }
        let d = self.degree().unwrap();
        if d % 2 != 0 {
            return None;
        }
        let half = d / 2;
        let lc = self.leading();
        let m = self.scale(&lc.inv().ok()?);
        let mut r = vec![self.zero.clone(); half + 1];
        r[half] = self.zero.one_like();
        let two = self.zero.from_i64_like(2);
        let two_inv = two.inv().ok()?;
        // Solve top-down: coefficient of t^(half+i) in r^2 is
        // 2 r_half r_i + (known cross terms), and r_half = 1.
        for i in (0..half).rev() {
            let mut s = self.zero.clone();
            let target = half + i;
            for j in (i + 1)..=half {
                let k = target.wrapping_sub(j);
                if k > half || k <= i || j < k {
                    continue;
                }
                let term = r[j].mul(&r[k]);
                s = if j == k { s.add(&term) } else { s.add(&term.mul(&two)) };
            }
            r[i] = m.coeff(target).sub(&s).mul(&two_inv);
        }
        let cand = Poly::new(&self.zero, r);
        if cand.mul(&cand) == m {
            Some((cand, lc))
        } else {
            None
        }
    }

    /// Exact square root for monic-square inputs (lc must equal 1).
    pub fn sqrt_exact(&self) -> Option<Self> {
        match self.sqrt_monic_part() {
            Some((s, lc)) if lc.is_one() => Some(s),
            _ => None,
        }
    }

    /// Resultant of self and rhs via the subresultant-free Euclidean scheme
    /// (fine over fields; exponent bookkeeping on leading coefficients).
    pub fn resultant(&self, rhs: &Self) -> Result<F> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        if a.is_zero() || b.is_zero() {
            return Ok(self.zero.clone());
        }
        let mut acc = self.zero.one_like();
        let mut sign_pos = true;
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                acc = acc.mul(&b.leading().pow_u(da as u64));
                break;
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(self.zero.clone());
            }
            let dr = r.degree().unwrap();
            // res(a,b) = (-1)^(da*db) lc(b)^(da - dr) res(b, r)
            acc = acc.mul(&b.leading().pow_u((da - dr) as u64));
            if (da * db) % 2 == 1 {
                sign_pos = !sign_pos;
            }
            a = b;
            b = r;
        }
        Ok(if sign_pos { acc } else { acc.neg() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::numberfield::{AlgebraicNumber, NumberField};

    fn q(n: i64) -> AlgebraicNumber {
        NumberField::rationals().from_i64(n)
    }

    #[test]
    fn div_rem_and_gcd() {
        let z = q(0);
        // (t^2 - 1) = (t - 1)(t + 1)
        let a = Poly::from_i64(&z, &[-1, 0, 1]);
        let b = Poly::from_i64(&z, &[-1, 1]);
        let (quo, rem) = a.div_rem(&b).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo, Poly::from_i64(&z, &[1, 1]));
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, b.monic().unwrap());
    }

    #[test]
    fn squarefree_decomposition_basic() {
        let z = q(0);
        // t^2 (t-1)^3
        let t = Poly::var(&z);
        let tm1 = Poly::from_i64(&z, &[-1, 1]);
        let f = t.mul(&t).mul(&tm1.mul(&tm1).mul(&tm1));
        let dec = f.squarefree_decomposition().unwrap();
        assert_eq!(dec.len(), 2);
        assert_eq!(dec[0], (t.clone(), 2));
        assert_eq!(dec[1], (tm1.clone(), 3));
    }

    #[test]
    fn poly_sqrt() {
        let z = q(0);
        // (t^3 + 2t - 5)^2
        let r = Poly::from_i64(&z, &[-5, 2, 0, 1]);
        let f = r.mul(&r);
        let s = f.sqrt_exact().unwrap();
        assert_eq!(s, r);
        let g = Poly::from_i64(&z, &[1, 1]);
        assert!(f.mul(&g).sqrt_exact().is_none());
    }

    #[test]
    fn resultant_matches_root_product() {
        let z = q(0);
        // res(t^2 - 1, t - 2) = (2^2 - 1) = 3 up to sign convention
        let a = Poly::from_i64(&z, &[-1, 0, 1]);
        let b = Poly::from_i64(&z, &[-2, 1]);
        let r = a.resultant(&b).unwrap();
        assert_eq!(r, q(3));
    }
}
