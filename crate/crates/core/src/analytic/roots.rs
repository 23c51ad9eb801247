//! Simultaneous polynomial root refinement (Aberth-Ehrlich) at arbitrary
//! precision. Inputs here are squarefree with well-separated roots, so plain
//! simultaneous iteration from circle starts converges quickly; precision is
//! escalated geometrically to the target.

use super::mpc::{cabs, cdist, poly_eval_d};
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Complex, Float};

/// All complex roots of the polynomial (ascending coefficients, exact degree).
pub fn all_roots(coeffs: &[Complex], target_bits: u32) -> Result<Vec<Complex>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Ok(vec![]);
    }
    let mut bits = 128u32;
    let mut zs = initial_guesses(coeffs, bits);
    loop {
        let cs: Vec<Complex> = coeffs.iter().map(|c| Complex::with_val(bits, c)).collect();
        zs = zs
            .into_iter()
            .map(|z| Complex::with_val(bits, z))
            .collect();
        aberth(&cs, &mut zs, bits)?;
        if bits >= target_bits {
            break;
        }
        bits = (bits * 2).min(target_bits.max(bits + 1));
    }
    Ok(zs)
}

fn initial_guesses(coeffs: &[Complex], bits: u32) -> Vec<Complex> {
    let deg = coeffs.len() - 1;
    // radius bound: 1 + max |c_i / c_n|
    let lead = cabs(&coeffs[deg]);
    let mut r = Float::with_val(bits, 0);
    for c in &coeffs[..deg] {
        let a = cabs(c) / &lead;
        if a > r {
            r = a;
        }
    }
    let radius = (Float::with_val(bits, 1) + r).to_f64().min(1e6).max(0.5);
    (0..deg)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.354) / deg as f64 + 0.11;
            Complex::with_val(bits, (radius * ang.cos(), radius * ang.sin()))
        })
        .collect()
}

fn aberth(coeffs: &[Complex], zs: &mut [Complex], bits: u32) -> Result<()> {
    let n = zs.len();
    let tol = Float::with_val(bits, 2).pow(-(bits as i32) + 16);
    for _iter in 0..200 + bits / 2 {
        let mut max_step = Float::with_val(bits, 0);
        for i in 0..n {
            let (v, dv) = poly_eval_d(coeffs, &zs[i]);
            if v.is_zero() {
                continue;
            }
            if dv.is_zero() {
                // nudge off a critical point
                zs[i] += Complex::with_val(bits, (1e-7, 1.3e-7));
                continue;
            }
            let w = Complex::with_val(bits, &v / &dv);
            let mut s = Complex::with_val(bits, 0);
            for j in 0..n {
                if j != i {
                    let d = Complex::with_val(bits, &zs[i] - &zs[j]);
                    if d.is_zero() {
                        continue;
                    }
                    s += Complex::with_val(bits, 1) / d;
                }
            }
            let denom = Complex::with_val(bits, 1) - Complex::with_val(bits, &w * &s);
            let step = if denom.is_zero() {
                w
            } else {
                Complex::with_val(bits, &w / &denom)
            };
            let sa = cabs(&step);
            if sa > max_step {
                max_step = sa.clone();
            }
            zs[i] -= step;
        }
        if max_step < tol {
            return Ok(());
        }
    }
    Err(Error::IllConditioned)
}

/// Minimal pairwise distance among points (used for conditioning checks).
pub fn min_separation(zs: &[Complex]) -> Option<Float> {
    let mut best: Option<Float> = None;
    for i in 0..zs.len() {
        for j in (i + 1)..zs.len() {
            let d = cdist(&zs[i], &zs[j]);
            best = Some(match best {
                None => d,
                Some(b) => {
                    if d < b {
                        d
                    } else {
                        b
                    }
                }
            });
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Complex;

    #[test]
    fn roots_of_worked_quintic() {
        // t^5 - t^4 + t^3 + t^2 - 2t + 1
        let bits = 700u32;
        let cs: Vec<Complex> = [1i64, -2, 1, 1, -1, 1]
            .iter()
            .map(|&c| Complex::with_val(bits, c))
            .collect();
        let rs = all_roots(&cs, bits).unwrap();
        assert_eq!(rs.len(), 5);
        for r in &rs {
            let (v, _) = poly_eval_d(&cs, r);
            assert!(cabs(&v).to_f64() < 1e-180);
        }
        let sep = min_separation(&rs).unwrap();
        assert!(sep.to_f64() > 1e-3);
    }
}
