//! Rational function interpolation over an exact field, via the homogeneous
//! linear system P(t_i) - c_i Q(t_i) = 0.

use super::field::Field;
use super::linalg::null_space;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

/// Interpolate a reduced rational function P/Q with deg P <= num_deg and
/// deg Q <= den_deg through the samples (t_i, c_i). Requires at least
/// num_deg + den_deg + 2 samples at distinct points.
pub fn rational_interpolate<F: Field>(
    samples: &[(F, F)],
    num_deg: usize,
    den_deg: usize,
) -> Result<RatFunc<F>> {
    let need = num_deg + den_deg + 2;
    if samples.len() < need {
        return Err(Error::InsufficientSamples {
            got: samples.len(),
            need,
        });
    }
    let zero = samples[0].0.zero_like();
    let cols = num_deg + den_deg + 2;
    let mut m: Vec<Vec<F>> = Vec::with_capacity(samples.len());
    for (t, c) in samples {
        let mut row = Vec::with_capacity(cols);
        let mut p = t.one_like();
        for _ in 0..=num_deg {
            row.push(p.clone());
            p = p.mul(t);
        }
        let mut q = c.neg();
        for _ in 0..=den_deg {
            row.push(q.clone());
            q = q.mul(t);
        }
        m.push(row);
    }
    let kernel = null_space(&m, &zero);
    if kernel.is_empty() {
        return Err(Error::NoFunctionOfThisDegree);
    }
    let build = |v: &[F]| -> Result<RatFunc<F>> {
        let num = Poly::new(&zero, v[..=num_deg].to_vec());
        let den = Poly::new(&zero, v[num_deg + 1..].to_vec());
        if den.is_zero() {
            return Err(Error::NoFunctionOfThisDegree);
        }
        RatFunc::new(num, den)
    };
    let f = build(&kernel[0])?;
    // Extra kernel dimensions must describe the same function (common factor
    // slack); anything else means the degree bounds are ambiguous.
    for v in kernel.iter().skip(1) {
        let g = build(v)?;
        if g != f {
            return Err(Error::AmbiguousDegree);
        }
    }
    // The solved system allows Q(t_i) = 0 paired with P(t_i) = 0; re-check
    // the reduced function honestly hits every sample.
    for (t, c) in samples {
        let d = f.den().eval(t);
        if d.is_zero() {
            return Err(Error::NoFunctionOfThisDegree);
        }
        if f.num().eval(t).mul(&d.inv()?) != *c {
            return Err(Error::NoFunctionOfThisDegree);
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::numberfield::NumberField;
    use rug::Rational;

    fn qsamples(f: impl Fn(i64) -> (i64, i64), ts: &[i64]) -> Vec<(crate::exact::numberfield::AlgebraicNumber, crate::exact::numberfield::AlgebraicNumber)> {
        let k = NumberField::rationals();
        ts.iter()
            .map(|&t| {
                let (n, d) = f(t);
                (
                    k.from_i64(t),
                    k.from_rational(Rational::from((n, d))),
                )
            })
            .collect()
    }

    #[test]
    fn linear_target() {
        // c = 1 - t at 5 points, bounds (1, 0)
        let s = qsamples(|t| (1 - t, 1), &[1, 2, 3, 4, 5]);
        let f = rational_interpolate(&s, 1, 0).unwrap();
        let k = NumberField::rationals();
        let z = k.zero();
        assert_eq!(f.num(), &Poly::from_i64(&z, &[1, -1]));
        assert!(f.den().is_one());
    }

    #[test]
    fn inverse_square_target() {
        // c = 1/t^2 at 5 nonzero points, bounds (0, 2)
        let s = qsamples(|t| (1, t * t), &[1, 2, 3, -1, -2]);
        let f = rational_interpolate(&s, 0, 2).unwrap();
        let k = NumberField::rationals();
        let z = k.zero();
        assert_eq!(f.num(), &Poly::from_i64(&z, &[1]));
        assert_eq!(f.den(), &Poly::from_i64(&z, &[0, 0, 1]));
    }

    #[test]
    fn planted_ratio() {
        // (3t^2+1)/(t-2) at 8 points with bounds (2,1)
        let s = qsamples(|t| (3 * t * t + 1, t - 2), &[0, 1, 3, 4, 5, -1, -2, -3]);
        let f = rational_interpolate(&s, 2, 1).unwrap();
        let k = NumberField::rationals();
        let z = k.zero();
        assert_eq!(f.num(), &Poly::from_i64(&z, &[1, 0, 3]));
        assert_eq!(f.den(), &Poly::from_i64(&z, &[-2, 1]));
    }

    #[test]
    fn generous_bounds_same_function() {
        // Same target with slack in both bounds still lands on the reduced form.
        let s = qsamples(|t| (3 * t * t + 1, t - 2), &[0, 1, 3, 4, 5, -1, -2, -3, 6, 7]);
        let f = rational_interpolate(&s, 3, 2).unwrap();
        let k = NumberField::rationals();
        let z = k.zero();
        assert_eq!(f.num(), &Poly::from_i64(&z, &[1, 0, 3]));
        assert_eq!(f.den(), &Poly::from_i64(&z, &[-2, 1]));
    }

    #[test]
    fn inconsistent_system_errors() {
        // Data from t^3 cannot be fit with bounds (1, 0).
        let s = qsamples(|t| (t * t * t, 1), &[0, 1, 2, 3, 4]);
        assert!(matches!(
            rational_interpolate(&s, 1, 0),
            Err(Error::NoFunctionOfThisDegree)
        ));
    }
}
