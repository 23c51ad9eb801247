//! Endomorphism detection on the analytic Jacobian: integer matrices T_Z with
//! Pi T_Z = T_Omega Pi, found by LLL on the linear conditions, and selection
//! of the trace-minimal real-multiplication generator.

use crate::analytic::mpc::{cabs, CMat2};
use crate::analytic::PeriodData;
use crate::error::{Error, Result};
use crate::exact::lll::lll_reduce;
use crate::prec::Prec;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

#[derive(Clone, Debug)]
pub struct EndoPair {
    pub t_z: [[i64; 4]; 4],
    pub t_omega: CMat2,
}

/// The selected real-multiplication generator with its certified-to-be
/// minimal polynomial x^2 - trace x + norm.
#[derive(Clone, Debug)]
pub struct RmGenerator {
    pub pair: EndoPair,
    pub trace: i64,
    pub norm: i64,
    pub disc: i64,
}

/// max |(Pi T_Z - T_Omega Pi)_{ij}|.
pub fn endo_residual(pd: &PeriodData, pair: &EndoPair) -> Float {
    let bits = pd.prec.bits();
    let mut worst = Float::with_val(bits, 0);
    for i in 0..2 {
        for j in 0..4 {
            let mut lhs = Complex::with_val(bits, 0);
            for k in 0..4 {
                if pair.t_z[k][j] != 0 {
                    lhs += Complex::with_val(bits, &pd.pi[i][k] * pair.t_z[k][j] as i32);
                }
            }
            let mut rhs = Complex::with_val(bits, 0);
            for k in 0..2 {
                rhs += Complex::with_val(bits, &pair.t_omega[i][k] * &pd.pi[k][j]);
            }
            let d = cabs(&Complex::with_val(bits, lhs - rhs));
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Least-squares T_Omega from an integer T_Z: T_Omega = (Pi T_Z) Pi^+ with
/// Pi^+ = Pi^H (Pi Pi^H)^{-1}.
pub fn t_omega_from_tz(pd: &PeriodData, t_z: &[[i64; 4]; 4]) -> Option<CMat2> {
    let bits = pd.prec.bits();
    // A = Pi T_Z (2x4)
    let mut a = [[Complex::with_val(bits, 0), Complex::with_val(bits, 0), Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
                 [Complex::with_val(bits, 0), Complex::with_val(bits, 0), Complex::with_val(bits, 0), Complex::with_val(bits, 0)]];
    for i in 0..2 {
        for j in 0..4 {
            let mut s = Complex::with_val(bits, 0);
            for k in 0..4 {
                if t_z[k][j] != 0 {
                    s += Complex::with_val(bits, &pd.pi[i][k] * t_z[k][j] as i32);
                }
            }
            a[i][j] = s;
        }
    }
    // G = Pi Pi^H (2x2), B = A Pi^H (2x2); T_Omega = B G^{-1}
    let herm = |m: &[[Complex; 4]; 2], n: &[[Complex; 4]; 2]| -> CMat2 {
        let mut out = [
            [Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
            [Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex::with_val(bits, 0);
                for k in 0..4 {
                    let c = n[j][k].clone().conj();
                    s += Complex::with_val(bits, &m[i][k] * &c);
                }
                out[i][j] = s;
            }
        }
        out
    };
    let g = herm(&pd.pi, &pd.pi);
    let b = herm(&a, &pd.pi);
    let ginv = crate::analytic::mpc::mat2_inv(&g)?;
    Some(crate::analytic::mpc::mat2_mul(&b, &ginv))
}

/// A Z-basis of the endomorphism lattice of the analytic Jacobian.
/// Entries of T_Z are capped at 256; the identity is always present.
pub fn endomorphism_lattice(pd: &PeriodData) -> Result<Vec<EndoPair>> {
    let bits = pd.prec.bits();
    // search precision is capped; verification runs at full precision
    let search_digits = pd.prec.digits().min(120);
    // kernel of Pi: solve Pi n = 0 for two independent 4-vectors
    let kernel = pi_kernel(pd);
    // lattice rows: identity tag + scaled real/imag parts of Pi E_ab kernel
    let scale = Float::with_val(bits, 10).pow(search_digits as i32 - 16);
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            let mut row: Vec<Integer> = (0..16)
                .map(|k| Integer::from((k == a * 4 + b) as i64))
                .collect();
            // condition block: Pi E_ab N = column a of Pi times row b of N
            for i in 0..2 {
                for j in 0..2 {
                    // (Pi E_ab N)_{ij} = Pi[i][a] * N[b][j]
                    let val = Complex::with_val(bits, &pd.pi[i][a] * &kernel[b][j]);
                    let re = Float::with_val(bits, val.real() * &scale);
                    let im = Float::with_val(bits, val.imag() * &scale);
                    row.push(re.round().to_integer().unwrap_or_default());
                    row.push(im.round().to_integer().unwrap_or_default());
                }
            }
            rows.push(row);
        }
    }
    let reduced = lll_reduce(&rows)?;
    let tail_tol = Float::with_val(64, 10).pow(((search_digits as i32) - 16) / 2);
    let resid_tol = Float::with_val(bits, 10).pow(-(pd.prec.digits() as i32) + 50);
    let mut found: Vec<EndoPair> = Vec::new();
    for v in &reduced {
        let coeffs = &v[..16];
        if coeffs.iter().all(|c| *c == 0) {
            continue;
        }
        if coeffs.iter().any(|c| c.clone().abs() > Integer::from(256)) {
            continue;
        }
        let mut small_tail = true;
        for t in &v[16..] {
            if Float::with_val(64, t.clone().abs()) > tail_tol {
                small_tail = false;
                break;
            }
        }
        if !small_tail {
            continue;
        }
        let mut t_z = [[0i64; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                t_z[a][b] = coeffs[a * 4 + b].to_i64().unwrap_or(0);
            }
        }
        let Some(t_omega) = t_omega_from_tz(pd, &t_z) else {
            continue;
        };
        let pair = EndoPair { t_z, t_omega };
        if endo_residual(pd, &pair) < resid_tol {
            found.push(pair);
        }
    }
    // make sure the identity is present
    let id_tz = {
        let mut m = [[0i64; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        m
    };
    if !found.iter().any(|p| p.t_z == id_tz) {
        let t_omega = t_omega_from_tz(pd, &id_tz).ok_or(Error::IllConditioned)?;
        found.insert(0, EndoPair { t_z: id_tz, t_omega });
    }
    Ok(found)
}

fn pi_kernel(pd: &PeriodData) -> [[Complex; 2]; 4] {
    let bits = pd.prec.bits();
    // Solve the 2x4 system by Gaussian elimination over C with partial
    // pivoting; kernel = two free columns back-substituted.
    let mut m: Vec<Vec<Complex>> = (0..2)
        .map(|i| (0..4).map(|j| pd.pi[i][j].clone()).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..4 {
        if r >= 2 {
            break;
        }
        // pivot: largest magnitude in column c at rows >= r
        let mut best = r;
        for rr in r..2 {
            if cabs(&m[rr][c]) > cabs(&m[best][c]) {
                best = rr;
            }
        }
        if cabs(&m[best][c]).is_zero() {
            continue;
        }
        m.swap(r, best);
        let inv = Complex::with_val(bits, 1) / &m[r][c];
        for cc in 0..4 {
            m[r][cc] = Complex::with_val(bits, &m[r][cc] * &inv);
        }
        for rr in 0..2 {
            if rr != r {
                let f = m[rr][c].clone();
                for cc in 0..4 {
                    let sub = Complex::with_val(bits, &m[r][cc] * &f);
                    m[rr][cc] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..4).filter(|c| !pivots.contains(c)).collect();
    let mut kernel: [[Complex; 2]; 4] = core::array::from_fn(|_| {
        [Complex::with_val(bits, 0), Complex::with_val(bits, 0)]
    });
    for (kidx, &fc) in free.iter().enumerate() {
        kernel[fc][kidx] = Complex::with_val(bits, 1);
        for (ri, &pc) in pivots.iter().enumerate() {
            kernel[pc][kidx] = Complex::with_val(bits, -m[ri][fc].clone());
        }
    }
    kernel
}

/// Integer linear combinations m*I + n*B whose 4x4 matrix satisfies a monic
/// quadratic x^2 - s x + nu; returns (s, nu) when it does.
fn quadratic_min_poly(m: &[[i64; 4]; 4]) -> Option<(i64, i64)> {
    // m^2 = s*m - nu*I solved exactly over the rationals
    let mut m2 = [[0i128; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc: i128 = 0;
            for k in 0..4 {
                acc += m[i][k] as i128 * m[k][j] as i128;
            }
            m2[i][j] = acc;
        }
    }
    // pick two independent coordinates to solve for s, nu; then verify all
    let mut s_nu: Option<(Rational, Rational)> = None;
    'outer: for i in 0..4 {
        for j in 0..4 {
            // equation: m2[i][j] = s*m[i][j] - nu*delta_ij
            // need a second equation; try all pairs
            for i2 in 0..4 {
                for j2 in 0..4 {
                    let a1 = m[i][j];
                    let b1 = -i64::from(i == j);
                    let c1 = m2[i][j];
                    let a2 = m[i2][j2];
                    let b2 = -i64::from(i2 == j2);
                    let c2 = m2[i2][j2];
                    let det = a1 as i128 * b2 as i128 - a2 as i128 * b1 as i128;
                    if det == 0 {
                        continue;
                    }
                    let s = Rational::from((
                        Integer::from(c1 as i128 * b2 as i128 - c2 as i128 * b1 as i128),
                        Integer::from(det),
                    ));
                    let nu = Rational::from((
                        Integer::from(a1 as i128 * c2 as i128 - a2 as i128 * c1 as i128),
                        Integer::from(det),
                    ));
                    s_nu = Some((s, nu));
                    break 'outer;
                }
            }
        }
    }
    let (s, nu) = s_nu?;
    if !s.is_integer() || !nu.is_integer() {
        return None;
    }
    let si = s.numer().to_i64()?;
    let nui = nu.numer().to_i64()?;
    // verify m2 == s*m - nu*I in full
    for i in 0..4 {
        for j in 0..4 {
            let rhs = si as i128 * m[i][j] as i128 - if i == j { nui as i128 } else { 0 };
            if m2[i][j] != rhs {
                return None;
            }
        }
    }
    Some((si, nui))
}

/// Select the trace-minimal generator of the order of discriminant D from the
/// endomorphism basis. The sign is pinned so the eigenvalue carried by the
/// first one-form dt/u has positive real part; `flip` inverts the choice.
pub fn select_generator(
    basis: &[EndoPair],
    d_target: i64,
    pd: &PeriodData,
    flip: bool,
) -> Result<RmGenerator> {
    if basis.len() < 2 {
        return Err(Error::NotRmByD(d_target));
    }
    let mut best: Option<RmGenerator> = None;
    for b in basis {
        // skip scalar matrices
        let is_scalar = {
            let d0 = b.t_z[0][0];
            let mut ok = true;
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { d0 } else { 0 };
                    if b.t_z[i][j] != want {
                        ok = false;
                    }
                }
            }
            ok
        };
        if is_scalar {
            continue;
        }
        for mm in -12i64..=12 {
            for nn in [-2i64, -1, 1, 2] {
                let mut cand = [[0i64; 4]; 4];
                for i in 0..4 {
                    for j in 0..4 {
                        cand[i][j] = nn * b.t_z[i][j] + if i == j { mm } else { 0 };
                    }
                }
                let Some((s, nu)) = quadratic_min_poly(&cand) else {
                    continue;
                };
                let disc = s * s - 4 * nu;
                if disc != d_target {
                    continue;
                }
                let tr_alpha_sq = s * s - 2 * nu;
                let better = match &best {
                    None => true,
                    Some(g) => tr_alpha_sq < (g.trace * g.trace - 2 * g.norm),
                };
                if better {
                    let Some(t_omega) = t_omega_from_tz(pd, &cand) else {
                        continue;
                    };
                    let pair = EndoPair { t_z: cand, t_omega };
                    let resid_tol = Float::with_val(pd.prec.bits(), 10)
                        .pow(-(pd.prec.digits() as i32) + 50);
                    if endo_residual(pd, &pair) < resid_tol {
                        best = Some(RmGenerator {
                            pair,
                            trace: s,
                            norm: nu,
                            disc,
                        });
                    }
                }
            }
        }
    }
    let Some(g) = best else {
        return Err(Error::NotRmByD(d_target));
    };
    // sign pinning through the dominant eigenvalue on dt/u
    let lam = eigenvalue_on_first_form(&g.pair.t_omega, pd.prec);
    let positive = lam > 0.0;
    let want_positive = !flip;
    if positive == want_positive {
        Ok(g)
    } else {
        // replace by the conjugate generator: trace - alpha
        let mut cand = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                cand[i][j] = -g.pair.t_z[i][j] + if i == j { g.trace } else { 0 };
            }
        }
        let t_omega = t_omega_from_tz(pd, &cand).ok_or(Error::IllConditioned)?;
        Ok(RmGenerator {
            pair: EndoPair { t_z: cand, t_omega },
            trace: g.trace,
            norm: g.norm,
            disc: g.disc,
        })
    }
}

/// Real part of the eigenvalue whose eigenline dominates the coordinate of
/// the first one-form in the action on forms (the transpose action).
fn eigenvalue_on_first_form(m: &CMat2, prec: Prec) -> f64 {
    let bits = prec.bits();
    // transpose action on coordinate vectors of forms
    let a = m[0][0].clone();
    let b = m[1][0].clone();
    let c = m[0][1].clone();
    let d = m[1][1].clone();
    // eigenvalues of [[a, b], [c, d]]
    let tr = Complex::with_val(bits, &a + &d);
    let det = Complex::with_val(bits, &a * &d) - Complex::with_val(bits, &b * &c);
    let disc = Complex::with_val(bits, &tr * &tr) - Complex::with_val(bits, &det * &Complex::with_val(bits, 4));
    let sq = disc.sqrt();
    let two = Complex::with_val(bits, 2);
    let l1 = Complex::with_val(bits, Complex::with_val(bits, &tr + &sq) / &two);
    let l2 = Complex::with_val(bits, Complex::with_val(bits, &tr - &sq) / &two);
    // eigenvectors v_i = (b, lambda_i - a); solve [v1 v2] c = e1 and compare
    // the |c_i| * ||v_i|| contributions
    let v1 = [b.clone(), Complex::with_val(bits, &l1 - &a)];
    let v2 = [b.clone(), Complex::with_val(bits, &l2 - &a)];
    let det2 = Complex::with_val(bits, &v1[0] * &v2[1]) - Complex::with_val(bits, &v2[0] * &v1[1]);
    if cabs(&det2).to_f64() < 1e-30 {
        // b ~ 0: the matrix is triangular; dt/u pairs with m[0][0]
        return m[0][0].real().to_f64();
    }
    let c1 = Complex::with_val(bits, &v2[1] / &det2);
    let c2 = Complex::with_val(bits, -(Complex::with_val(bits, &v1[1] / &det2)));
    let w1 = cabs(&c1).to_f64() * (cabs(&v1[0]).to_f64() + cabs(&v1[1]).to_f64());
    let w2 = cabs(&c2).to_f64() * (cabs(&v2[0]).to_f64() + cabs(&v2[1]).to_f64());
    if w1 >= w2 {
        l1.real().to_f64()
    } else {
        l2.real().to_f64()
    }
}
