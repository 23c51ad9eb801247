//! Exact-integer LLL lattice reduction (delta = 3/4) and the integer-relation
//! machinery built on it: recognizing floating-point numbers as elements of a
//! number field and finding K-linear relations among complex values.

use super::field::Field;
use super::numberfield::{AlgebraicNumber, NumberField};
use crate::error::{Error, Result};
use crate::prec::Prec;
use rug::ops::{DivRounding, Pow};
use rug::{Complex, Float, Integer, Rational};
use std::sync::Arc;

/// LLL-reduce the rows of `basis` in place (Lovasz delta = 3/4), using the
/// all-integer Gram-Schmidt bookkeeping. Rows must be linearly independent.
pub fn lll_reduce(basis: &[Vec<Integer>]) -> Result<Vec<Vec<Integer>>> {
    let n = basis.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let m = basis[0].len();
    assert!(basis.iter().all(|r| r.len() == m));
    let mut b: Vec<Vec<Integer>> = basis.to_vec();

    // d[i] = Gram determinant of the first i vectors; d[0] = 1.
    let mut d: Vec<Integer> = vec![Integer::from(1); n + 1];
    let mut lam = vec![vec![Integer::new(); n]; n];

    let dot = |x: &[Integer], y: &[Integer]| -> Integer {
        let mut s = Integer::new();
        for (a, c) in x.iter().zip(y) {
            s += Integer::from(a * c);
        }
        s
    };

    // Incremental exact Gram-Schmidt in the d/lambda representation.
    let gram_step = |b: &Vec<Vec<Integer>>,
                     d: &mut Vec<Integer>,
                     lam: &mut Vec<Vec<Integer>>,
                     i: usize|
     -> Result<()> {
        for j in 0..=i {
            let mut u = dot(&b[i], &b[j]);
            for k in 0..j {
                let t = Integer::from(&d[k + 1] * &u) - Integer::from(&lam[i][k] * &lam[j][k]);
                let (q, r) = t.div_rem(d[k].clone());
                if r != 0 {
                    return Err(Error::Internal("inexact division in LLL".into()));
                }
                u = q;
            }
            if j < i {
                lam[i][j] = u;
            } else {
                if u == 0 {
                    return Err(Error::DegenerateLattice);
                }
                d[i + 1] = u;
            }
        }
        Ok(())
    };

    for i in 0..n {
        gram_step(&b, &mut d, &mut lam, i)?;
    }

    // Size-reduce row k against row l.
    fn red(
        b: &mut [Vec<Integer>],
        d: &[Integer],
        lam: &mut [Vec<Integer>],
        k: usize,
        l: usize,
    ) {
        let two_lam = Integer::from(2 * &lam[k][l]).abs();
        if two_lam <= d[l + 1] {
            return;
        }
        // q = nearest integer to lam[k][l] / d[l+1]
        let num = Integer::from(2 * &lam[k][l]) + &d[l + 1];
        let den = Integer::from(2 * &d[l + 1]);
        let q = num.div_floor(den);
        if q == 0 {
            return;
        }
        for t in 0..b[k].len() {
            let sub = Integer::from(&q * &b[l][t]);
            b[k][t] -= sub;
        }
        lam[k][l] -= Integer::from(&q * &d[l + 1]);
        for j in 0..l {
            let sub = Integer::from(&q * &lam[l][j]);
            lam[k][j] -= sub;
        }
    }

    let mut k = 1usize;
    let mut guard = 0u64;
    while k < n {
        guard += 1;
        if guard > 2_000_000 {
            return Err(Error::Internal("LLL failed to terminate".into()));
        }
        red(&mut b, &d, &mut lam, k, k - 1);
        // Lovasz (delta = 3/4): swap if 4(d[k+1] d[k-1] + lam^2) < 3 d[k]^2.
        let lhs = (Integer::from(&d[k + 1] * &d[k - 1]) + Integer::from(&lam[k][k - 1] * &lam[k][k - 1])) * 4u32;
        let rhs = Integer::from(&d[k] * &d[k]) * 3u32;
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k.saturating_sub(1) {
                let tmp = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = tmp;
            }
            let lam_kk = lam[k][k - 1].clone();
            let bnew = exact_div(
                Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(&lam_kk * &lam_kk),
                &d[k],
            )?;
            for i in (k + 1)..n {
                let t = lam[i][k].clone();
                lam[i][k] = exact_div(
                    Integer::from(&d[k + 1] * &lam[i][k - 1]) - Integer::from(&lam_kk * &t),
                    &d[k],
                )?;
                lam[i][k - 1] = exact_div(
                    Integer::from(&bnew * &t) + Integer::from(&lam_kk * &lam[i][k]),
                    &d[k + 1],
                )?;
            }
            d[k] = bnew;
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(&mut b, &d, &mut lam, k, l);
            }
            k += 1;
        }
    }
    Ok(b)
}

fn exact_div(num: Integer, den: &Integer) -> Result<Integer> {
    let (q, r) = num.div_rem(den.clone());
    if r != 0 {
        return Err(Error::Internal("inexact division in LLL swap".into()));
    }
    Ok(q)
}

/// Check the size-reduction and Lovasz conditions exactly (test support).
pub fn is_lll_reduced(basis: &[Vec<Integer>]) -> bool {
    let n = basis.len();
    if n == 0 {
        return true;
    }
    // Rational Gram-Schmidt.
    let m = basis[0].len();
    let mut star: Vec<Vec<Rational>> = Vec::new();
    let mut mu: Vec<Vec<Rational>> = vec![vec![Rational::new(); n]; n];
    let mut norms: Vec<Rational> = Vec::new();
    for i in 0..n {
        let mut v: Vec<Rational> = basis[i].iter().map(|x| Rational::from(x)).collect();
        for j in 0..i {
            let mut num = Rational::new();
            for t in 0..m {
                num += Rational::from(&star[j][t] * &Rational::from(&basis[i][t]));
            }
            let mu_ij = Rational::from(&num / &norms[j]);
            for t in 0..m {
                let sub = Rational::from(&mu_ij * &star[j][t]);
                v[t] -= sub;
            }
            mu[i][j] = mu_ij;
        }
        let mut nv = Rational::new();
        for t in 0..m {
            nv += Rational::from(&v[t] * &v[t]);
        }
        star.push(v);
        norms.push(nv);
    }
    for i in 0..n {
        for j in 0..i {
            if Rational::from(mu[i][j].clone().abs()) > Rational::from((1, 2)) {
                return false;
            }
        }
    }
    for k in 1..n {
        // ||b*_k||^2 >= (3/4 - mu^2) ||b*_{k-1}||^2
        let lhs = norms[k].clone();
        let rhs = (Rational::from((3, 4)) - Rational::from(&mu[k][k - 1] * &mu[k][k - 1]))
            * norms[k - 1].clone();
        if lhs < rhs {
            return false;
        }
    }
    true
}

fn round_to_integer(f: &Float) -> Integer {
    f.clone().round().to_integer().unwrap_or_default()
}

/// Find a short integer relation sum_i m_i z_i ~ 0 among complex values.
/// `rows` gives one or more constraint vectors: rows[r][i] is the value of
/// term i under constraint r; a relation must annihilate every row.
/// Returns the coefficient vector of the best candidate or None.
pub fn integer_relation(
    rows: &[Vec<Complex>],
    prec: Prec,
    guard_digits: u32,
) -> Option<Vec<Integer>> {
    let nterms = rows.first()?.len();
    let bits = prec.bits();
    let scale_digits = prec.digits().saturating_sub(guard_digits);
    let scale = Float::with_val(bits, 10).pow(scale_digits);

    let mut basis: Vec<Vec<Integer>> = Vec::with_capacity(nterms);
    for i in 0..nterms {
        let mut row: Vec<Integer> = vec![Integer::new(); nterms];
        row[i] = Integer::from(1);
        for r in rows {
            let re = Float::with_val(bits, r[i].real() * &scale);
            let im = Float::with_val(bits, r[i].imag() * &scale);
            row.push(round_to_integer(&re));
            row.push(round_to_integer(&im));
        }
        basis.push(row);
    }
    let reduced = lll_reduce(&basis).ok()?;

    // Accept the first reduced vector whose scaled-residual block is tiny
    // relative to the scale and whose coefficient block is nonzero.
    let tol = Float::with_val(bits, 10).pow(guard_digits + (guard_digits / 2));
    for v in &reduced {
        let coeffs = &v[..nterms];
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        let mut resid_ok = true;
        for t in nterms..v.len() {
            let mag = Float::with_val(64, v[t].clone().abs());
            if mag > tol {
                resid_ok = false;
                break;
            }
        }
        if resid_ok {
            return Some(coeffs.to_vec());
        }
    }
    None
}

/// Verify a proposed relation against the rows at full precision:
/// |sum m_i z_i| < 10^(-guard) * max|z_i| for every row.
pub fn relation_residual_ok(
    rows: &[Vec<Complex>],
    coeffs: &[Integer],
    prec: Prec,
    guard_digits: u32,
) -> bool {
    let bits = prec.bits();
    for row in rows {
        let mut acc = Complex::with_val(bits, 0);
        let mut scale = Float::with_val(bits, 1e-300);
        for (m, z) in coeffs.iter().zip(row) {
            acc += Complex::with_val(bits, z * m);
            let a = Float::with_val(bits, z.clone().abs().real() * Float::with_val(64, m.clone().abs()));
            if a > scale {
                scale = a;
            }
        }
        let bound = scale * Float::with_val(bits, 10).pow(-(guard_digits as i32));
        if *Complex::with_val(bits, acc).abs().real() >= bound {
            return false;
        }
    }
    true
}

/// Recognize a K-linear relation among complex values: coefficients q_i in K
/// with sum q_i z_i = 0 for every constraint row, found as an integer
/// relation among { theta^j * z_i }.
pub fn recognize_k_relation(
    rows: &[Vec<Complex>],
    field: &Arc<NumberField>,
    prec: Prec,
    guard_digits: u32,
) -> Result<Vec<AlgebraicNumber>> {
    let d = field.degree();
    let bits = prec.bits();
    let theta = field.root(prec);
    let nterms = rows.first().map(|r| r.len()).unwrap_or(0);
    if nterms == 0 {
        return Err(Error::RecognitionFailure);
    }
    // Expanded rows: term (i, j) carries theta^j * z_i.
    let mut exp_rows: Vec<Vec<Complex>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut er = Vec::with_capacity(nterms * d);
        for z in row {
            let mut p = Complex::with_val(bits, 1);
            for _ in 0..d {
                er.push(Complex::with_val(bits, z * &p));
                p *= &theta;
            }
        }
        exp_rows.push(er);
    }
    let coeffs = integer_relation(&exp_rows, prec, guard_digits)
        .ok_or(Error::RecognitionFailure)?;
    if !relation_residual_ok(&exp_rows, &coeffs, prec, guard_digits) {
        return Err(Error::RecognitionFailure);
    }
    let mut out = Vec::with_capacity(nterms);
    for i in 0..nterms {
        let coords: Vec<Rational> = (0..d)
            .map(|j| Rational::from(&coeffs[i * d + j]))
            .collect();
        out.push(field.element(coords));
    }
    Ok(out)
}

/// Recognize a single complex number as an element of K with bounded height.
pub fn recognize_algebraic(
    z: &Complex,
    field: &Arc<NumberField>,
    height_bound: &Integer,
    prec: Prec,
) -> Result<AlgebraicNumber> {
    let guard = 30u32;
    let bits = prec.bits();
    let one = Complex::with_val(bits, 1);
    // Relation among [z, 1]: q_z z + q_1 = 0 with q's in K.
    let rel = recognize_k_relation(
        &[vec![z.clone(), one]],
        field,
        prec,
        guard,
    )?;
    let qz = &rel[0];
    let q1 = &rel[1];
    if qz.is_zero() {
        return Err(Error::RecognitionFailure);
    }
    let cand = q1.neg().mul(&qz.inv()?);
    if &cand.height() > height_bound {
        return Err(Error::RecognitionFailure);
    }
    // Final check: embedding must match z to 10^(-p+guard).
    let emb = cand.embed(prec);
    let diff = Complex::with_val(bits, &emb - z).abs();
    let scale = Float::with_val(bits, z.clone().abs().real()).max(&Float::with_val(bits, 1));
    let tol = scale * Float::with_val(bits, 10).pow(-(prec.digits() as i32) + guard as i32);
    if *diff.real() > tol {
        return Err(Error::RecognitionFailure);
    }
    Ok(cand)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_already_reduced() {
        let id: Vec<Vec<Integer>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| Integer::from((i == j) as i64))
                    .collect()
            })
            .collect();
        let r = lll_reduce(&id).unwrap();
        assert_eq!(r, id);
        assert!(is_lll_reduced(&r));
    }

    #[test]
    fn planted_golden_ratio_relation() {
        // Lattice rows encode (1, phi_approx scaled): a relation for
        // x^2 - x - 1 appears as a short vector.
        let phi = 1.618034f64;
        let scale = 1_000_000f64;
        let rows = vec![
            vec![Integer::from(1), Integer::from(0), Integer::from(0), Integer::from((1.0 * scale) as i64)],
            vec![Integer::from(0), Integer::from(1), Integer::from(0), Integer::from((phi * scale) as i64)],
            vec![Integer::from(0), Integer::from(0), Integer::from(1), Integer::from((phi * phi * scale) as i64)],
        ];
        let r = lll_reduce(&rows).unwrap();
        assert!(is_lll_reduced(&r));
        // Some reduced vector must encode +-(1, 1, -1) in the first three slots.
        assert!(r.iter().any(|v| {
            (v[0] == 1 && v[1] == 1 && v[2] == -1) || (v[0] == -1 && v[1] == -1 && v[2] == 1)
        }));
    }

    #[test]
    fn two_dim_short_vector() {
        // rows {(2,0),(1,2)}: shortest vector has squared norm <= 4
        // (exhaustive check over small combinations is the oracle).
        let rows = vec![
            vec![Integer::from(2), Integer::from(0)],
            vec![Integer::from(1), Integer::from(2)],
        ];
        let r = lll_reduce(&rows).unwrap();
        assert!(is_lll_reduced(&r));
        let n0: Integer = r[0].iter().map(|x| Integer::from(x * x)).sum();
        // brute force: min over |a|,|b| <= 3, (a,b) != 0 of |a(2,0)+b(1,2)|^2 = 4
        let mut best = Integer::from(i64::MAX);
        for a in -3i64..=3 {
            for bq in -3i64..=3 {
                if a == 0 && bq == 0 {
                    continue;
                }
                let x = 2 * a + bq;
                let y = 2 * bq;
                best = best.min(Integer::from(x * x + y * y));
            }
        }
        assert_eq!(best, Integer::from(4));
        assert!(n0 <= Integer::from(4));
    }

    #[test]
    fn dependent_rows_error() {
        let rows = vec![
            vec![Integer::from(1), Integer::from(2)],
            vec![Integer::from(2), Integer::from(4)],
        ];
        assert!(matches!(lll_reduce(&rows), Err(Error::DegenerateLattice)));
    }

    #[test]
    fn recognize_simple_rational() {
        let field = NumberField::rationals();
        let prec = Prec(120);
        let z = Complex::with_val(prec.bits(), 0.5f64);
        let x = recognize_algebraic(&z, &field, &Integer::from(1000), prec).unwrap();
        assert_eq!(x, field.from_rational(Rational::from((1, 2))));
    }

    #[test]
    fn recognize_golden_ratio() {
        let field = NumberField::quadratic(5);
        let prec = Prec(150);
        let bits = prec.bits();
        let five = Float::with_val(bits, 5);
        let phi = (Float::with_val(bits, 1) + five.sqrt()) / 2u32;
        let z = Complex::with_val(bits, phi);
        let x = recognize_algebraic(&z, &field, &Integer::from(1000), prec).unwrap();
        let expected = field.element(vec![Rational::from((1, 2)), Rational::from((1, 2))]);
        assert_eq!(x, expected);
    }

    #[test]
    fn recognize_round_trip() {
        // 47/2 - (8/3) sqrt5 embedded then recognized.
        let field = NumberField::quadratic(5);
        let prec = Prec(400);
        let x = field.element(vec![Rational::from((47, 2)), Rational::from((-8, 3))]);
        let z = x.embed(prec);
        let back = recognize_algebraic(&z, &field, &Integer::from(10).pow(30), prec).unwrap();
        assert_eq!(back, x);
    }
}
