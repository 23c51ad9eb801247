//! The Abel-Jacobi map: path integration from the base point at infinity,
//! reduction modulo the period lattice, and inversion by Newton continuation
//! along a straight homotopy of targets.

use super::integrate::{CurveIntegrand, PairIntegral};
use super::mpc::{c_from_f64, cabs, cdist, poly_eval, poly_eval_d, sqrt_matched, CMat2};
use super::periods::PeriodData;
use super::quadrature::gauss_legendre;
use crate::curves::ModelKind;
use crate::error::{Error, Result};
use crate::exact::lll::lll_reduce;
use crate::prec::Prec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::{Complex, Float, Integer};

#[derive(Clone, Debug)]
pub struct AJVector {
    pub v: [Complex; 2],
    pub prec: Prec,
}

impl AJVector {
    pub fn zero(prec: Prec) -> Self {
        let bits = prec.bits();
        AJVector {
            v: [Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
            prec,
        }
    }

    pub fn add(&self, other: &AJVector) -> AJVector {
        let bits = self.prec.bits();
        AJVector {
            v: [
                Complex::with_val(bits, &self.v[0] + &other.v[0]),
                Complex::with_val(bits, &self.v[1] + &other.v[1]),
            ],
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &AJVector) -> AJVector {
        let bits = self.prec.bits();
        AJVector {
            v: [
                Complex::with_val(bits, &self.v[0] - &other.v[0]),
                Complex::with_val(bits, &self.v[1] - &other.v[1]),
            ],
            prec: self.prec,
        }
    }

    pub fn scale_i(&self, k: i64) -> AJVector {
        let bits = self.prec.bits();
        AJVector {
            v: [
                Complex::with_val(bits, &self.v[0] * k as i32),
                Complex::with_val(bits, &self.v[1] * k as i32),
            ],
            prec: self.prec,
        }
    }

    pub fn scale_f(&self, s: f64) -> AJVector {
        let bits = self.prec.bits();
        let sf = Float::with_val(bits, s);
        AJVector {
            v: [
                Complex::with_val(bits, &self.v[0] * &sf),
                Complex::with_val(bits, &self.v[1] * &sf),
            ],
            prec: self.prec,
        }
    }

    pub fn apply_mat(&self, m: &CMat2) -> AJVector {
        let bits = self.prec.bits();
        AJVector {
            v: [
                Complex::with_val(bits, &m[0][0] * &self.v[0])
                    + Complex::with_val(bits, &m[0][1] * &self.v[1]),
                Complex::with_val(bits, &m[1][0] * &self.v[0])
                    + Complex::with_val(bits, &m[1][1] * &self.v[1]),
            ],
            prec: self.prec,
        }
    }

    pub fn norm(&self) -> Float {
        let a = cabs(&self.v[0]);
        let b = cabs(&self.v[1]);
        if a > b {
            a
        } else {
            b
        }
    }
}

/// Precomputed data for repeated reduction modulo the period lattice:
/// an LLL-improved basis and the inverse of its real 4x4 matrix.
pub struct LatticeCtx {
    bits: u32,
    /// combos[j] expresses reduced basis vector j in the period columns
    combos: [[i64; 4]; 4],
    inv: [[Float; 4]; 4],
    pi: [[Complex; 4]; 2],
}

impl LatticeCtx {
    pub fn new(pd: &PeriodData) -> Self {
        let bits = pd.prec.bits();
        let cols: Vec<[Float; 4]> = (0..4)
            .map(|j| {
                [
                    pd.pi[0][j].real().clone(),
                    pd.pi[0][j].imag().clone(),
                    pd.pi[1][j].real().clone(),
                    pd.pi[1][j].imag().clone(),
                ]
            })
            .collect();
        let scale = Float::with_val(bits, 10).pow(24);
        let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(4);
        for (j, col) in cols.iter().enumerate() {
            let mut row: Vec<Integer> = col
                .iter()
                .map(|f| {
                    Float::with_val(bits, f * &scale)
                        .round()
                        .to_integer()
                        .unwrap_or_default()
                })
                .collect();
            for k in 0..4 {
                row.push(Integer::from((j == k) as i64));
            }
            rows.push(row);
        }
        let reduced = lll_reduce(&rows).unwrap_or(rows);
        let mut combos = [[0i64; 4]; 4];
        for (i, r) in reduced.iter().enumerate().take(4) {
            for k in 0..4 {
                combos[i][k] = r[4 + k].to_i64().unwrap_or(0);
            }
        }
        // real matrix of the reduced basis, column c = basis vector c
        let mut mat = vec![vec![Float::with_val(bits, 0); 4]; 4];
        for (c, combo) in combos.iter().enumerate() {
            for (j, col) in cols.iter().enumerate() {
                if combo[j] != 0 {
                    let f = Float::with_val(bits, combo[j]);
                    for r in 0..4 {
                        mat[r][c] += Float::with_val(bits, &col[r] * &f);
                    }
                }
            }
        }
        let inv = invert4(&mat, bits).expect("period lattice basis invertible");
        LatticeCtx {
            bits,
            combos,
            inv,
            pi: pd.pi.clone(),
        }
    }

    /// Shortest representative of v over lattice translates (Babai rounding
    /// plus a +-1 local search on the reduced basis).
    pub fn reduce(&self, v: &AJVector) -> AJVector {
        let bits = self.bits;
        let target = [
            v.v[0].real().clone(),
            v.v[0].imag().clone(),
            v.v[1].real().clone(),
            v.v[1].imag().clone(),
        ];
        let mut coords = [0f64; 4];
        for r in 0..4 {
            let mut s = Float::with_val(bits, 0);
            for c in 0..4 {
                s += Float::with_val(bits, &self.inv[r][c] * &target[c]);
            }
            coords[r] = s.to_f64();
        }
        let base: Vec<i64> = coords.iter().map(|c| c.round() as i64).collect();
        let mut best: Option<(Float, AJVector)> = None;
        for d0 in -1i64..=1 {
            for d1 in -1i64..=1 {
                for d2 in -1i64..=1 {
                    for d3 in -1i64..=1 {
                        let ks = [base[0] + d0, base[1] + d1, base[2] + d2, base[3] + d3];
                        let mut w = v.clone();
                        for (j, &k) in ks.iter().enumerate() {
                            if k == 0 {
                                continue;
                            }
                            for (col_idx, &cj) in self.combos[j].iter().enumerate() {
                                let f = k * cj;
                                if f != 0 {
                                    w.v[0] -=
                                        Complex::with_val(bits, &self.pi[0][col_idx] * f as i32);
                                    w.v[1] -=
                                        Complex::with_val(bits, &self.pi[1][col_idx] * f as i32);
                                }
                            }
                        }
                        let n = w.norm();
                        match &best {
                            Some((bn, _)) if *bn <= n => {}
                            _ => best = Some((n, w)),
                        }
                    }
                }
            }
        }
        best.map(|(_, w)| w).unwrap_or_else(|| v.clone())
    }
}

fn invert4(m: &[Vec<Float>], bits: u32) -> Option<[[Float; 4]; 4]> {
    let mut a: Vec<Vec<Float>> = (0..4)
        .map(|r| {
            let mut row = m[r].clone();
            for c in 0..4 {
                row.push(Float::with_val(bits, i64::from(r == c)));
            }
            row
        })
        .collect();
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].clone().abs() > a[piv][col].clone().abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        if a[col][col].is_zero() {
            return None;
        }
        let inv = Float::with_val(bits, 1) / &a[col][col];
        for c in 0..8 {
            a[col][c] = Float::with_val(bits, &a[col][c] * &inv);
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..8 {
                    let sub = Float::with_val(bits, &a[col][c] * &f);
                    a[r][c] -= sub;
                }
            }
        }
    }
    let mut out: [[Float; 4]; 4] = core::array::from_fn(|_| {
        core::array::from_fn(|_| Float::with_val(bits, 0))
    });
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = a[r][4 + c].clone();
        }
    }
    Some(out)
}

/// Shortest representative of v modulo the column lattice of Pi.
pub fn reduce_mod_lattice(v: &AJVector, pd: &PeriodData) -> AJVector {
    LatticeCtx::new(pd).reduce(v)
}

/// Anchor abscissa: a fixed far point so paths to infinity stay away from the
/// branch locus; direction fixed for determinism.
fn anchor(pd: &PeriodData) -> Complex {
    let bits = pd.prec.bits();
    let mut r = Float::with_val(bits, 1);
    for b in &pd.numerics.branch_points {
        let a = cabs(b);
        if a > r {
            r = a;
        }
    }
    let radius = Float::with_val(bits, &r * &Float::with_val(bits, 4)) + 2u32;
    let dir = c_from_f64(bits, 0.9272f64.cos(), 0.9272f64.sin());
    Complex::with_val(bits, &dir * &radius)
}

/// Integral of both forms from the base point at infinity to the anchor,
/// with the continued sheet of u at the anchor. The substitution
/// t = t_a / s^e (e = 2 quintic, 1 sextic) makes the integrand analytic on
/// [0, 1] with singularities kept at distance >= 1.
fn infinite_leg(pd: &PeriodData, t_a: &Complex) -> Result<(PairIntegral, Complex)> {
    let bits = pd.prec.bits();
    let digits = pd.prec.digits();
    let h = &pd.numerics.h;
    let e = match pd.numerics.kind {
        ModelKind::Quintic => 2u32,
        ModelKind::Sextic => 1u32,
    };
    let asym = |t: &Complex| -> Complex {
        match pd.numerics.kind {
            ModelKind::Quintic => Complex::with_val(bits, t.clone().pow(5)).sqrt(),
            ModelKind::Sextic => {
                let s_lc = pd.numerics.sqrt_lc.as_ref().expect("sextic sqrt lc");
                let t3 = Complex::with_val(bits, t.clone().pow(3));
                let lc = &h[h.len() - 1];
                let h5 = &h[h.len() - 2];
                let corr = Complex::with_val(bits, h5 / lc)
                    / Complex::with_val(bits, t * 2u32)
                    + 1u32;
                Complex::with_val(bits, s_lc * &t3) * corr
            }
        }
    };
    let eval_with = |pieces: usize, n: usize| -> (PairIntegral, Complex) {
        let mut acc = PairIntegral {
            i1: Complex::with_val(bits, 0),
            i2: Complex::with_val(bits, 0),
        };
        let mut u_prev: Option<Complex> = None;
        let (nodes, weights) = &*gauss_legendre(n, bits);
        for piece in 0..pieces {
            let lo = piece as f64 / pieces as f64;
            let hi = (piece + 1) as f64 / pieces as f64;
            let mid = Float::with_val(bits, (lo + hi) / 2.0);
            let half = Float::with_val(bits, (hi - lo) / 2.0);
            for (x, w) in nodes.iter().zip(weights) {
                let s = Float::with_val(bits, &mid + Float::with_val(bits, &half * x));
                let spow = Float::with_val(bits, s.clone().pow(e));
                let t = Complex::with_val(bits, t_a / &spow);
                let hv = poly_eval(h, &t);
                let u = match &u_prev {
                    Some(p) => sqrt_matched(&hv, p),
                    None => sqrt_matched(&hv, &asym(&t)),
                };
                let spow1 = Float::with_val(bits, s.clone().pow(e + 1));
                let dt_ds = Complex::with_val(
                    bits,
                    -(Complex::with_val(bits, t_a * &Float::with_val(bits, e))),
                ) / &spow1;
                let wh = Float::with_val(bits, &half * w);
                let g1 = Complex::with_val(bits, &dt_ds / &u);
                acc.i1 += Complex::with_val(bits, &g1 * &wh);
                acc.i2 += Complex::with_val(bits, &g1 * &t) * &wh;
                u_prev = Some(u);
            }
        }
        let u_anchor = sqrt_matched(&poly_eval(h, t_a), u_prev.as_ref().unwrap());
        (acc, u_anchor)
    };
    let n = (digits as usize / 2 + 28).min(640);
    let (a1, _) = eval_with(2, n);
    let (a2, u2) = eval_with(4, n);
    let tol = Float::with_val(bits, 10).pow(-(digits as i32) - 8)
        * (Float::with_val(bits, 1) + cabs(&a2.i1) + cabs(&a2.i2));
    if a1.dist(&a2) > tol {
        let (a3, u3) = eval_with(8, n);
        if a2.dist(&a3) > tol {
            return Err(Error::IllConditioned);
        }
        return Ok((a3, u3));
    }
    Ok((a2, u2))
}

/// Straight path from `from` to `to` with deterministic circular detours
/// around branch points that come too close to the segment.
fn detoured_path(pd: &PeriodData, from: &Complex, to: &Complex) -> Vec<Complex> {
    let bits = pd.prec.bits();
    let mut path = vec![from.clone()];
    let seg_dir = Complex::with_val(bits, to - from);
    let seg_len = cabs(&seg_dir);
    if seg_len.is_zero() {
        path.push(to.clone());
        return path;
    }
    let mut hits: Vec<(f64, usize)> = Vec::new();
    for (idx, b) in pd.numerics.branch_points.iter().enumerate() {
        let v = Complex::with_val(bits, b - from);
        let re = Float::with_val(bits, v.real() * seg_dir.real());
        let im = Float::with_val(bits, v.imag() * seg_dir.imag());
        let s = ((re + im) / Float::with_val(bits, &seg_len * &seg_len)).to_f64();
        if !(0.02..=0.98).contains(&s) {
            continue;
        }
        let proj = point_on_c(from, &seg_dir, s);
        let d = cdist(&proj, b);
        let clearance = local_clearance(pd, idx);
        if d < Float::with_val(bits, 0.5) * &clearance {
            hits.push((s, idx));
        }
    }
    hits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (s, idx) in hits {
        let b = &pd.numerics.branch_points[idx];
        let clearance = local_clearance(pd, idx);
        let r = Float::with_val(bits, 0.45) * &clearance;
        let proj = point_on_c(from, &seg_dir, s);
        let mut off = Complex::with_val(bits, &proj - b);
        if cabs(&off).is_zero() {
            off = Complex::with_val(bits, &seg_dir * &Float::with_val(bits, 1e-3));
            off *= Complex::with_val(bits, (0, 1));
        }
        let phi0 = off.imag().to_f64().atan2(off.real().to_f64());
        for k in 0..=6 {
            // always walk counterclockwise around the obstacle
            let phi = phi0 + std::f64::consts::PI * (k as f64 / 6.0);
            let w = Complex::with_val(
                bits,
                b + Complex::with_val(bits, &c_from_f64(bits, phi.cos(), phi.sin()) * &r),
            );
            path.push(w);
        }
    }
    path.push(to.clone());
    path
}

fn point_on_c(from: &Complex, dir: &Complex, s: f64) -> Complex {
    let bits = from.prec().0;
    let sf = Float::with_val(bits, s);
    Complex::with_val(bits, from + Complex::with_val(bits, dir * &sf))
}

fn local_clearance(pd: &PeriodData, idx: usize) -> Float {
    let bits = pd.prec.bits();
    let b = &pd.numerics.branch_points[idx];
    let mut best = Float::with_val(bits, 1e300);
    for (j, other) in pd.numerics.branch_points.iter().enumerate() {
        if j != idx {
            let d = cdist(b, other);
            if d < best {
                best = d;
            }
        }
    }
    best
}

/// Full small circle around the branch point nearest to `near`; inserting it
/// into a path flips the sheet of everything downstream.
fn sheet_flip_loop(pd: &PeriodData, near: &Complex) -> Vec<Complex> {
    let bits = pd.prec.bits();
    let (bidx, _) = nearest_branch(pd, near);
    let b = &pd.numerics.branch_points[bidx];
    let r = Float::with_val(bits, 0.4) * &local_clearance(pd, bidx);
    let off = Complex::with_val(bits, near - b);
    let a = cabs(&off);
    let entry_dir = if a.is_zero() {
        c_from_f64(bits, 1.0, 0.0)
    } else {
        Complex::with_val(bits, &off / &a)
    };
    let phi0 = entry_dir.imag().to_f64().atan2(entry_dir.real().to_f64());
    let entry = Complex::with_val(bits, b + Complex::with_val(bits, &entry_dir * &r));
    let mut path = vec![near.clone(), entry];
    for k in 1..=12 {
        let phi = phi0 + 2.0 * std::f64::consts::PI * (k as f64 / 12.0);
        path.push(Complex::with_val(
            bits,
            b + Complex::with_val(bits, &c_from_f64(bits, phi.cos(), phi.sin()) * &r),
        ));
    }
    path.push(near.clone());
    path
}

fn nearest_branch(pd: &PeriodData, t: &Complex) -> (usize, Float) {
    let bits = pd.prec.bits();
    let mut best = (0usize, Float::with_val(bits, 1e300));
    for (i, b) in pd.numerics.branch_points.iter().enumerate() {
        let d = cdist(t, b);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

impl PairIntegral {
    fn add_assign(&mut self, o: &PairIntegral) {
        self.i1 += &o.i1;
        self.i2 += &o.i2;
    }
}

/// Abel-Jacobi image of the affine point (t_p, u_p), unreduced.
pub fn abel_jacobi(pd: &PeriodData, t_p: &Complex, u_p: &Complex) -> Result<AJVector> {
    let bits = pd.prec.bits();
    let t_a = anchor(pd);
    let (leg0, u_anchor) = infinite_leg(pd, &t_a)?;
    let integrand = pd.numerics.integrand();
    let (near_idx, near_dist) = nearest_branch(pd, t_p);
    let clearance = local_clearance(pd, near_idx);
    let switch = near_dist < Float::with_val(bits, 0.2) * &clearance;

    // two passes at most: plain, then with a sheet-flipping loop prepended
    for flip in [false, true] {
        let mut result = PairIntegral {
            i1: leg0.i1.clone(),
            i2: leg0.i2.clone(),
        };
        let mut path = Vec::new();
        if flip {
            path.extend(sheet_flip_loop(pd, &t_a));
        } else {
            path.push(t_a.clone());
        }
        let stop_t = if switch {
            let b = &pd.numerics.branch_points[near_idx];
            let dir0 = Complex::with_val(bits, &t_a - b);
            let dn = cabs(&dir0);
            let dir = Complex::with_val(bits, &dir0 / &dn);
            let r = Float::with_val(bits, 0.35) * &clearance;
            Complex::with_val(bits, b + Complex::with_val(bits, &dir * &r))
        } else {
            t_p.clone()
        };
        let tail = detoured_path(pd, &t_a, &stop_t);
        path.extend(tail.into_iter().skip(1));
        let (main, u_end) = integrand.along_path(&path, &u_anchor)?;
        result.add_assign(&main);
        let (u_final, ok) = if switch {
            let (fin, u_fin) = u_chart_leg(pd, &stop_t, &u_end, t_p)?;
            result.add_assign(&fin);
            let ok = if u_p.is_zero() {
                true
            } else {
                cdist(&u_fin, u_p) < cdist(&Complex::with_val(bits, -u_fin.clone()), u_p)
            };
            (u_fin, ok)
        } else {
            let ok = cdist(&u_end, u_p) < cdist(&Complex::with_val(bits, -u_end.clone()), u_p);
            (u_end, ok)
        };
        let _ = u_final;
        if ok {
            return Ok(AJVector {
                v: [result.i1, result.i2],
                prec: pd.prec,
            });
        }
    }
    Err(Error::Internal("could not land on the requested sheet".into()))
}

/// Final approach to a target near a branch point in the u-chart:
/// dt/u = 2 du / h'(t), t tracked by Newton along the straight u-segment.
fn u_chart_leg(
    pd: &PeriodData,
    t_from: &Complex,
    u_from: &Complex,
    t_target: &Complex,
) -> Result<(PairIntegral, Complex)> {
    let bits = pd.prec.bits();
    let digits = pd.prec.digits();
    let h = &pd.numerics.h;
    let u_target_abs = poly_eval(h, t_target).sqrt();
    let run = |u_tgt: &Complex| -> Result<(PairIntegral, Complex)> {
        let n = (digits as usize / 2 + 28).min(640);
        let (nodes, weights) = &*gauss_legendre(n, bits);
        let du = Complex::with_val(bits, u_tgt - u_from);
        let half = Complex::with_val(bits, &du / &Complex::with_val(bits, 2));
        let mid = Complex::with_val(bits, u_from + &half);
        let mut acc = PairIntegral {
            i1: Complex::with_val(bits, 0),
            i2: Complex::with_val(bits, 0),
        };
        let mut t_cur = t_from.clone();
        for (x, w) in nodes.iter().zip(weights) {
            let u = Complex::with_val(bits, &mid + Complex::with_val(bits, &half * x));
            for _ in 0..96 {
                let (v, dv) = poly_eval_d(h, &t_cur);
                let target = Complex::with_val(bits, &u * &u);
                let r = Complex::with_val(bits, &v - &target);
                if dv.is_zero() {
                    return Err(Error::IllConditioned);
                }
                let step = Complex::with_val(bits, &r / &dv);
                let done = cabs(&step) < Float::with_val(bits, 2).pow(-(bits as i32) + 24);
                t_cur -= step;
                if done {
                    break;
                }
            }
            let (_, dh) = poly_eval_d(h, &t_cur);
            if dh.is_zero() {
                return Err(Error::IllConditioned);
            }
            let base = Complex::with_val(bits, &half * w) * 2u32 / Complex::with_val(bits, dh);
            acc.i1 += &base;
            acc.i2 += Complex::with_val(bits, &base * &t_cur);
        }
        // continue the tracking to the endpoint itself, then verify we ended
        // at the requested abscissa (wrong u-sign lands on the involute)
        for _ in 0..96 {
            let (v, dv) = poly_eval_d(h, &t_cur);
            let target = Complex::with_val(bits, u_tgt * u_tgt);
            let r = Complex::with_val(bits, &v - &target);
            if dv.is_zero() {
                return Err(Error::IllConditioned);
            }
            let step = Complex::with_val(bits, &r / &dv);
            let done = cabs(&step) < Float::with_val(bits, 2).pow(-(bits as i32) + 24);
            t_cur -= step;
            if done {
                break;
            }
        }
        let d = cdist(&t_cur, t_target);
        let scale = cabs(t_target) + Float::with_val(bits, 1);
        if d / scale > Float::with_val(bits, 1e-12) {
            return Err(Error::InversionFailure);
        }
        Ok((acc, u_tgt.clone()))
    };
    match run(&u_target_abs) {
        Ok(out) => Ok(out),
        Err(_) => run(&Complex::with_val(bits, -u_target_abs.clone())),
    }
}

/// Abel-Jacobi image of the non-base point at infinity on sextic models.
pub fn aj_infinity_minus(pd: &PeriodData) -> Result<AJVector> {
    let bits = pd.prec.bits();
    if pd.numerics.kind != ModelKind::Sextic {
        return Ok(AJVector::zero(pd.prec));
    }
    let t_a = anchor(pd);
    let (leg0, u_anchor) = infinite_leg(pd, &t_a)?;
    let digits = pd.prec.digits();
    let h = &pd.numerics.h;
    let integrand = pd.numerics.integrand();
    let out = |prefix: Option<Vec<Complex>>| -> Result<(PairIntegral, bool)> {
        let mut acc = PairIntegral {
            i1: Complex::with_val(bits, 0),
            i2: Complex::with_val(bits, 0),
        };
        let mut u_cur = u_anchor.clone();
        if let Some(loop_path) = prefix {
            let (part, u2) = integrand.along_path(&loop_path, &u_cur)?;
            acc.add_assign(&part);
            u_cur = u2;
        }
        let n = (digits as usize / 2 + 28).min(640);
        let (nodes, weights) = &*gauss_legendre(n, bits);
        let pieces = 6usize;
        let mut u_prev = u_cur;
        // s runs 1 -> 0 (anchor out to infinity): integrate descending
        for piece in 0..pieces {
            let hi = 1.0 - piece as f64 / pieces as f64;
            let lo = 1.0 - (piece + 1) as f64 / pieces as f64;
            let mid = Float::with_val(bits, (lo + hi) / 2.0);
            let half = Float::with_val(bits, (hi - lo) / 2.0);
            for (x, w) in nodes.iter().rev().zip(weights.iter().rev()) {
                let s = Float::with_val(bits, &mid + Float::with_val(bits, &half * x));
                let t = Complex::with_val(bits, &t_a / &s);
                let hv = poly_eval(h, &t);
                let u = sqrt_matched(&hv, &u_prev);
                let s2 = Float::with_val(bits, &s * &s);
                // dt = -t_a/s^2 ds, and ds sweeps downward: net +t_a/s^2 |ds|
                let dt = Complex::with_val(bits, &t_a / &s2);
                let wh = Float::with_val(bits, &half * w);
                let g1 = Complex::with_val(bits, &dt / &u);
                acc.i1 += Complex::with_val(bits, &g1 * &wh);
                acc.i2 += Complex::with_val(bits, &g1 * &t) * &wh;
                u_prev = u;
            }
        }
        // which infinity did we reach?
        let s_small = Float::with_val(bits, 1e-3);
        let t_far = Complex::with_val(bits, &t_a / &s_small);
        let u_far = sqrt_matched(&poly_eval(h, &t_far), &u_prev);
        let s_lc = pd.numerics.sqrt_lc.as_ref().unwrap();
        let t3 = Complex::with_val(bits, t_far.clone().pow(3));
        let plus = Complex::with_val(bits, s_lc * &t3);
        let d_plus = cdist(&u_far, &plus);
        let d_minus = cdist(&u_far, &Complex::with_val(bits, -plus));
        Ok((acc, d_plus < d_minus))
    };
    let (first, landed_plus) = out(None)?;
    let mut total = leg0;
    if landed_plus {
        let (second, plus2) = out(Some(sheet_flip_loop(pd, &t_a)))?;
        if plus2 {
            return Err(Error::Internal("could not reach the far infinity".into()));
        }
        total.add_assign(&second);
    } else {
        total.add_assign(&first);
    }
    Ok(AJVector {
        v: [total.i1, total.i2],
        prec: pd.prec,
    })
}

#[derive(Clone)]
struct Mover {
    t: Complex,
    u: Complex,
}

/// Invert the Abel-Jacobi map: an unordered pair {Q, R} of affine points with
/// AJ(Q) + AJ(R) = v modulo the lattice, found by Newton continuation along
/// the straight homotopy of targets from a random start.
pub fn aj_inverse(
    pd: &PeriodData,
    v: &AJVector,
    seed: u64,
) -> Result<[(Complex, Complex); 2]> {
    let bits = pd.prec.bits();
    let digits = pd.prec.digits();
    let lattice = LatticeCtx::new(pd);
    let v_red = lattice.reduce(v);
    let zero_tol = Float::with_val(bits, 10).pow(-((digits / 2) as i32));
    if v_red.norm() < zero_tol {
        return Err(Error::NonUniqueFiber);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0bad_c0ff_ee00);
    let mut scale = Float::with_val(bits, 1);
    for b in &pd.numerics.branch_points {
        let a = cabs(b);
        if a > scale {
            scale = a;
        }
    }
    for _attempt in 0..10 {
        match aj_inverse_attempt(pd, &lattice, &v_red, &mut rng, &scale) {
            Ok(pair) => return Ok(pair),
            Err(Error::InversionFailure) | Err(Error::IllConditioned) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InversionFailure)
}

fn random_start(pd: &PeriodData, rng: &mut ChaCha8Rng, scale: &Float) -> Mover {
    let bits = pd.prec.bits();
    let ang = rng.gen_range(0.0..std::f64::consts::TAU);
    let rad = 0.8 + 1.1 * rng.gen_range(0.0f64..1.0);
    let t = Complex::with_val(
        bits,
        &c_from_f64(bits, rad * ang.cos(), rad * ang.sin()) * scale,
    );
    let u = poly_eval(&pd.numerics.h, &t).sqrt();
    Mover { t, u }
}

fn aj_inverse_attempt(
    pd: &PeriodData,
    lattice: &LatticeCtx,
    v_red: &AJVector,
    rng: &mut ChaCha8Rng,
    scale: &Float,
) -> Result<[(Complex, Complex); 2]> {
    let bits = pd.prec.bits();
    let digits = pd.prec.digits();
    let integrand = pd.numerics.integrand();
    let mut q = random_start(pd, rng, scale);
    let mut r = random_start(pd, rng, scale);
    let ajq = abel_jacobi(pd, &q.t, &q.u)?;
    let ajr = abel_jacobi(pd, &r.t, &r.u)?;
    let mut v_cur = ajq.add(&ajr);
    let v_start = v_cur.clone();
    let delta_target = v_red.sub(&v_start);
    let mut tau = 0f64;
    let mut step = 0.125f64;
    let final_tol = Float::with_val(bits, 10).pow(-((digits / 2) as i32) - 6);
    let mut guard = 0usize;
    while tau < 1.0 {
        guard += 1;
        if guard > 600 {
            return Err(Error::InversionFailure);
        }
        let tau_next = (tau + step).min(1.0);
        let target = v_start.add(&delta_target.scale_f(tau_next));
        let tol = if tau_next >= 1.0 {
            final_tol.clone()
        } else {
            Float::with_val(bits, 1e-10)
        };
        let save_q = q.clone();
        let save_r = r.clone();
        let save_v = v_cur.clone();
        match newton_polish(pd, lattice, &integrand, &mut q, &mut r, &mut v_cur, &target, &tol) {
            Ok(()) => {
                tau = tau_next;
                step = (step * 1.7).min(0.25);
            }
            Err(_) => {
                q = save_q;
                r = save_r;
                v_cur = save_v;
                step *= 0.5;
                if step < 1e-7 {
                    return Err(Error::InversionFailure);
                }
            }
        }
    }
    if cdist(&q.t, &r.t) < Float::with_val(bits, 10).pow(-((digits / 2) as i32)) {
        let du = cdist(&q.u, &r.u);
        let du2 = cdist(&q.u, &Complex::with_val(bits, -r.u.clone()));
        if du2 < du {
            return Err(Error::NonUniqueFiber);
        }
    }
    Ok([(q.t, q.u), (r.t, r.u)])
}

#[allow(clippy::too_many_arguments)]
fn newton_polish(
    pd: &PeriodData,
    lattice: &LatticeCtx,
    integrand: &CurveIntegrand<'_>,
    q: &mut Mover,
    r: &mut Mover,
    v_cur: &mut AJVector,
    target: &AJVector,
    tol: &Float,
) -> Result<()> {
    let bits = pd.prec.bits();
    let mut last_norm: Option<Float> = None;
    for _iter in 0..60 {
        let resid = lattice.reduce(&target.sub(v_cur));
        let rn = resid.norm();
        if rn < *tol {
            return Ok(());
        }
        if let Some(ln) = &last_norm {
            if rn > Float::with_val(bits, ln * &Float::with_val(bits, 4)) {
                return Err(Error::InversionFailure);
            }
        }
        last_norm = Some(rn);
        if q.u.is_zero() || r.u.is_zero() {
            return Err(Error::InversionFailure);
        }
        let m: CMat2 = [
            [
                Complex::with_val(bits, 1) / &q.u,
                Complex::with_val(bits, 1) / &r.u,
            ],
            [
                Complex::with_val(bits, &q.t / &q.u),
                Complex::with_val(bits, &r.t / &r.u),
            ],
        ];
        let det = Complex::with_val(bits, &m[0][0] * &m[1][1])
            - Complex::with_val(bits, &m[0][1] * &m[1][0]);
        if cabs(&det) < Float::with_val(bits, 1e-16) {
            return Err(Error::InversionFailure);
        }
        let minv = super::mpc::mat2_inv(&m).ok_or(Error::InversionFailure)?;
        let delta = super::mpc::mat2_mul_vec(&minv, &resid.v);
        let clamp = |mv: &Mover, d: &Complex| -> Complex {
            let (_, bd) = nearest_branch(pd, &mv.t);
            let lim = Float::with_val(bits, 0.35) * &bd.max(&Float::with_val(bits, 1e-6));
            let a = cabs(d);
            if a > lim {
                let f = Float::with_val(bits, &lim / &a);
                Complex::with_val(bits, d * &f)
            } else {
                d.clone()
            }
        };
        let dq = clamp(q, &delta[0]);
        let dr = clamp(r, &delta[1]);
        move_point(integrand, q, &dq, v_cur)?;
        move_point(integrand, r, &dr, v_cur)?;
    }
    Err(Error::InversionFailure)
}

fn move_point(
    integrand: &CurveIntegrand<'_>,
    mv: &mut Mover,
    dt: &Complex,
    v_cur: &mut AJVector,
) -> Result<()> {
    let bits = mv.t.prec().0;
    if dt.is_zero() {
        return Ok(());
    }
    let t_new = Complex::with_val(bits, &mv.t + dt);
    let (pair, u_new) = integrand.along_path(&[mv.t.clone(), t_new.clone()], &mv.u)?;
    v_cur.v[0] += &pair.i1;
    v_cur.v[1] += &pair.i2;
    mv.t = t_new;
    mv.u = u_new;
    Ok(())
}

/// Abel-Jacobi image of an exact tower point under the pinned embeddings.
pub fn aj_of_exact_point(
    pd: &PeriodData,
    t: &crate::exact::TowerElt,
    u: &crate::exact::TowerElt,
) -> Result<AJVector> {
    let prec = pd.prec;
    abel_jacobi(pd, &t.embed(prec), &u.embed(prec))
}
