//! Rational functions num/den over any coefficient field, kept reduced with
//! monic denominator.

use super::field::{Field, FieldSqrt};
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> PartialEq for RatFunc<F> {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero("rational function denominator"));
        }
        let mut rf = RatFunc { num, den };
        rf.reduce()?;
        Ok(rf)
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let den = Poly::one(p.ctx());
        RatFunc { num: p, den }
    }

    pub fn constant(c: F) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn zero(ctx: &F) -> Self {
        RatFunc::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &F) -> Self {
        RatFunc::from_poly(Poly::one(ctx))
    }

    pub fn var(ctx: &F) -> Self {
        RatFunc::from_poly(Poly::var(ctx))
    }

    fn reduce(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = Poly::one(self.den.ctx());
            return Ok(());
        }
        let g = self.num.gcd(&self.den)?;
        if g.degree().map(|d| d > 0).unwrap_or(false) {
            self.num = self.num.div_exact(&g)?;
            self.den = self.den.div_exact(&g)?;
        }
        let lead = self.den.leading();
        if !lead.is_one() {
            let li = lead.inv()?;
            self.num = self.num.scale(&li);
            self.den = self.den.scale(&li);
        }
        Ok(())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn ctx(&self) -> &F {
        self.num.ctx()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly<F>> {
        if self.is_poly() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn eval(&self, x: &F) -> Result<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero("rational function at a pole"));
        }
        Ok(self.num.eval(x).mul(&d.inv()?))
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2; constructor re-reduces.
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        let d = self.den.mul(&self.den);
        RatFunc::new(n, d).expect("denominator nonzero")
    }

    /// Valuation at infinity: deg den - deg num (zero function -> large).
    pub fn val_at_infinity(&self) -> i64 {
        if self.num.is_zero() {
            i64::MAX / 2
        } else {
            self.den.deg_i() - self.num.deg_i()
        }
    }

    /// Order of vanishing at a finite point c (negative for a pole).
    pub fn ord_at(&self, c: &F) -> i64 {
        fn strip<F: Field>(p: &Poly<F>, c: &F) -> i64 {
            let mut p = p.clone();
            let mut k = 0;
            let lin = Poly::new(p.ctx(), vec![c.neg(), c.one_like()]);
            while !p.is_zero() && p.eval(c).is_zero() {
                p = p.div_exact(&lin).expect("root divides");
                k += 1;
            }
            k
        }
        if self.num.is_zero() {
            return i64::MAX / 2;
        }
        strip(&self.num, c) - strip(&self.den, c)
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.ctx())
    }

    fn one_like(&self) -> Self {
        RatFunc::one(self.ctx())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self
            .num
            .mul(&rhs.den)
            .add(&rhs.num.mul(&self.den));
        let d = self.den.mul(&rhs.den);
        RatFunc::new(n, d).expect("denominator nonzero")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let n = self.num.mul(&rhs.num);
        let d = self.den.mul(&rhs.den);
        RatFunc::new(n, d).expect("denominator nonzero")
    }

    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("rational function inverse"));
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        RatFunc::constant(self.ctx().from_i64_like(n))
    }

    fn content_scale(v: &[Self]) -> Option<Self> {
        // clear denominators by their lcm and divide out the gcd of the
        // cleared numerators: scale = L / G
        let nonzero: Vec<&Self> = v.iter().filter(|e| !e.is_zero()).collect();
        if nonzero.len() < 2 {
            return None;
        }
        let ctx = nonzero[0].ctx();
        let mut l = Poly::one(ctx);
        let mut all_den_one = true;
        for e in &nonzero {
            if !e.den().is_one() {
                all_den_one = false;
                let g = l.gcd(e.den()).ok()?;
                l = l.mul(&e.den().div_exact(&g).ok()?);
            }
        }
        let mut g: Option<Poly<F>> = None;
        for e in &nonzero {
            let cleared = e.num().mul(&l.div_exact(e.den()).ok()?);
            g = Some(match g {
                None => cleared,
                Some(prev) => prev.gcd(&cleared).ok()?,
            });
        }
        let g = g?;
        if all_den_one && g.degree().unwrap_or(0) == 0 {
            return None;
        }
        if g.is_zero() {
            return None;
        }
        RatFunc::new(l, g).ok()
    }
}

impl<F: FieldSqrt> FieldSqrt for RatFunc<F> {
    fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (sn, lc_n) = self.num.sqrt_monic_part()?;
        let (sd, lc_d) = self.den.sqrt_monic_part()?;
        debug_assert!(lc_d.is_one());
        let w = lc_n.sqrt_in_field()?;
        Some(
            RatFunc::new(sn.scale(&w), sd)
                .expect("denominator nonzero"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::numberfield::NumberField;

    #[test]
    fn arithmetic_and_reduction() {
        let q = NumberField::rationals();
        let z = q.zero();
        let t = RatFunc::var(&z);
        let one = RatFunc::one(&z);
        // 1/t + 1 = (t+1)/t
        let f = t.inv().unwrap().add(&one);
        assert_eq!(f.num(), &Poly::from_i64(&z, &[1, 1]));
        assert_eq!(f.den(), &Poly::from_i64(&z, &[0, 1]));
        // f - f = 0
        assert!(f.sub(&f).is_zero());
        // (t^2-1)/(t-1) reduces to t+1
        let g = RatFunc::new(Poly::from_i64(&z, &[-1, 0, 1]), Poly::from_i64(&z, &[-1, 1])).unwrap();
        assert!(g.is_poly());
        assert_eq!(g.num(), &Poly::from_i64(&z, &[1, 1]));
    }

    #[test]
    fn sqrt_of_square() {
        let q = NumberField::rationals();
        let z = q.zero();
        let f = RatFunc::new(
            Poly::from_i64(&z, &[0, 0, 4]),
            Poly::from_i64(&z, &[1, 2, 1]),
        )
        .unwrap();
        // f = 4t^2/(t+1)^2
        let r = f.sqrt_in_field().unwrap();
        assert_eq!(r.mul(&r), f);
    }
}
