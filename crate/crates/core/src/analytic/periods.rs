//! Big period matrices: branch points, a homology basis from loops around
//! consecutive branch-point pairs, intersection numbers by explicit crossing
//! counting with sheet tags, integer symplectic normalization, and the
//! Riemann bilinear relations as a hard validity gate.

use super::integrate::CurveIntegrand;
use super::mpc::{cabs, cdist, embed_poly, poly_eval, CMat24};
use super::roots::{all_roots, min_separation};
use crate::curves::{CurveModel, ModelKind};
use crate::error::{Error, Result};
use crate::exact::AlgebraicNumber;
use crate::prec::Prec;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Embedded curve data reused by every numeric routine.
#[derive(Clone)]
pub struct CurveNumerics {
    pub h: Vec<Complex>,
    pub branch_points: Vec<Complex>,
    pub kind: ModelKind,
    /// sextic: embedding of the chosen sqrt of lc(h) (the base point at
    /// infinity has u/t^3 -> +sqrt_lc).
    pub sqrt_lc: Option<Complex>,
    pub prec: Prec,
}

impl CurveNumerics {
    pub fn new(curve: &CurveModel<AlgebraicNumber>, prec: Prec) -> Result<Self> {
        let bits = prec.bits();
        let h = embed_poly(&curve.h, prec);
        let roots = all_roots(&h, bits)?;
        let sep = min_separation(&roots).unwrap_or_else(|| Float::with_val(bits, 1));
        let tol = Float::with_val(bits, 10).pow(-(prec.digits() as i32) / 2);
        if sep < tol {
            return Err(Error::IllConditioned);
        }
        let sqrt_lc = match curve.kind {
            ModelKind::Quintic => None,
            ModelKind::Sextic => {
                let v = curve.vplus.as_ref().expect("sextic carries V");
                Some(v.leading().embed(prec))
            }
        };
        Ok(CurveNumerics {
            h,
            branch_points: roots,
            kind: curve.kind,
            sqrt_lc,
            prec,
        })
    }

    pub fn bits(&self) -> u32 {
        self.prec.bits()
    }

    pub fn integrand(&self) -> CurveIntegrand<'_> {
        CurveIntegrand {
            h: &self.h,
            branch_points: &self.branch_points,
            bits: self.bits(),
            digits: self.prec.digits(),
        }
    }
}

/// Periods of (dt/u, t dt/u) over a symplectic homology basis, with the
/// intersection matrix reduced to the standard J.
#[derive(Clone)]
pub struct PeriodData {
    pub pi: CMat24,
    pub prec: Prec,
    pub numerics: CurveNumerics,
}

pub const J_STD: [[i64; 4]; 4] = [
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [-1, 0, 0, 0],
    [0, -1, 0, 0],
];

/// A closed polygonal cycle on the surface: waypoints plus the sheet choice
/// at the first waypoint (u there is the principal square root).
struct Cycle {
    path: Vec<Complex>,
    u_start: Complex,
}

fn lex_sort(points: &mut [Complex]) {
    points.sort_by(|a, b| {
        let (ar, ai) = (a.real(), a.imag());
        let (br, bi) = (b.real(), b.imag());
        ar.partial_cmp(br)
            .unwrap()
            .then(ai.partial_cmp(bi).unwrap())
    });
}

/// Stadium-shaped loop around the segment [e0, e1] at tube radius r,
/// counterclockwise, polygonized with arc steps of ~30 degrees.
fn stadium(e0: &Complex, e1: &Complex, r: &Float, bits: u32) -> Vec<Complex> {
    let dir = Complex::with_val(bits, e1 - e0);
    let len = cabs(&dir);
    let unit = Complex::with_val(bits, &dir / &len);
    let theta = {
        let im = unit.imag().to_f64();
        let re = unit.real().to_f64();
        im.atan2(re)
    };
    let mut path = Vec::new();
    let arc = |center: &Complex, from: f64, to: f64, path: &mut Vec<Complex>| {
        let steps = 7usize;
        for k in 0..=steps {
            let phi = from + (to - from) * (k as f64 / steps as f64);
            let p = Complex::with_val(
                bits,
                center
                    + Complex::with_val(
                        bits,
                        &Complex::with_val(bits, (phi.cos(), phi.sin())) * r,
                    ),
            );
            path.push(p);
        }
    };
    use std::f64::consts::PI;
    // far cap around e0, from theta+pi/2 to theta+3pi/2
    arc(e0, theta + PI / 2.0, theta + 3.0 * PI / 2.0, &mut path);
    // rail to far cap around e1, from theta-pi/2 to theta+pi/2
    arc(e1, theta - PI / 2.0, theta + PI / 2.0, &mut path);
    // close
    let first = path[0].clone();
    path.push(first);
    path
}

/// Signed crossings of two polylines with sheet filtering; near-tangent
/// crossings abort (caller retries with different radii).
fn surface_intersection(
    integrand: &CurveIntegrand<'_>,
    a: &Cycle,
    b: &Cycle,
) -> Result<i64> {
    let ua = integrand.continue_sheet(&a.path, &a.u_start)?;
    let ub = integrand.continue_sheet(&b.path, &b.u_start)?;
    let mut total = 0i64;
    for i in 0..a.path.len() - 1 {
        let (p0, p1) = (&a.path[i], &a.path[i + 1]);
        for j in 0..b.path.len() - 1 {
            let (q0, q1) = (&b.path[j], &b.path[j + 1]);
            let Some((s, t, sign)) = segment_crossing(p0, p1, q0, q1)? else {
                continue;
            };
            // sheet of each curve at the crossing point
            let xa = point_on(p0, p1, s);
            let xb = point_on(q0, q1, t);
            let u_at = |path_u: &Complex, from: &Complex, to: &Complex| -> Result<Complex> {
                integrand
                    .continue_sheet(&[from.clone(), to.clone()], path_u)
                    .map(|v| v.last().unwrap().clone())
            };
            let u_a = u_at(&ua[i], p0, &xa)?;
            let u_b = u_at(&ub[j], q0, &xb)?;
            let same = {
                let dplus = cdist(&u_a, &u_b);
                let bits = u_a.prec().0;
                let dminus = cdist(&Complex::with_val(bits, -u_b.clone()), &u_a);
                dplus < dminus
            };
            if same {
                total += sign;
            }
        }
    }
    Ok(total)
}

fn point_on(p0: &Complex, p1: &Complex, s: f64) -> Complex {
    let bits = p0.prec().0;
    let d = Complex::with_val(bits, p1 - p0);
    let sf = Float::with_val(bits, s);
    Complex::with_val(bits, p0 + Complex::with_val(bits, &d * &sf))
}

/// Proper crossing of open segments; Some((s, t, orientation sign)).
fn segment_crossing(
    p0: &Complex,
    p1: &Complex,
    q0: &Complex,
    q1: &Complex,
) -> Result<Option<(f64, f64, i64)>> {
    let ax = p0.real().to_f64();
    let ay = p0.imag().to_f64();
    let bx = p1.real().to_f64();
    let by = p1.imag().to_f64();
    let cx = q0.real().to_f64();
    let cy = q0.imag().to_f64();
    let dx = q1.real().to_f64();
    let dy = q1.imag().to_f64();
    let r = (bx - ax, by - ay);
    let q = (dx - cx, dy - cy);
    let denom = r.0 * q.1 - r.1 * q.0;
    let len2 = ((r.0 * r.0 + r.1 * r.1) * (q.0 * q.0 + q.1 * q.1)).sqrt();
    if len2 == 0.0 {
        return Ok(None);
    }
    if denom.abs() < 1e-9 * len2 {
        // parallel or near-tangent: make sure they are actually disjoint
        return Ok(None);
    }
    let s = ((cx - ax) * q.1 - (cy - ay) * q.0) / denom;
    let t = ((cx - ax) * r.1 - (cy - ay) * r.0) / denom;
    let eps = 1e-9;
    if s <= eps || s >= 1.0 - eps || t <= eps || t >= 1.0 - eps {
        if (eps..=3.0 * eps).contains(&s)
            || ((1.0 - 3.0 * eps)..=(1.0 - eps)).contains(&s)
            || (eps..=3.0 * eps).contains(&t)
            || ((1.0 - 3.0 * eps)..=(1.0 - eps)).contains(&t)
        {
            return Err(Error::Internal("near-degenerate crossing".into()));
        }
        return Ok(None);
    }
    Ok(Some((s, t, if denom > 0.0 { 1 } else { -1 })))
}

/// Integer congruence reduction of an antisymmetric matrix to hyperbolic
/// blocks: returns U with U N U^T having pairs (2k, 2k+1) = +-1 and the
/// symplectic rank. Errors if an elementary divisor exceeds 1.
fn symplectic_basis(n0: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, usize)> {
    let k = n0.len();
    let mut n: Vec<Vec<i64>> = n0.to_vec();
    let mut u: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect();

    let row_op = |n: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, r: usize, s: usize, c: i64| {
        // row r += c * row s, and the matching column op
        for j in 0..k {
            n[r][j] += c * n[s][j];
        }
        for i in 0..k {
            n[i][r] += c * n[i][s];
        }
        for j in 0..k {
            u[r][j] += c * u[s][j];
        }
    };
    let swap_rows = |n: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, r: usize, s: usize| {
        n.swap(r, s);
        for row in n.iter_mut() {
            row.swap(r, s);
        }
        u.swap(r, s);
    };

    let mut start = 0usize;
    while start + 1 < k {
        // find minimal nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in start..k {
            for j in (i + 1)..k {
                if n[i][j] != 0 {
                    if let Some((pi, pj)) = pivot {
                        if n[i][j].abs() < n[pi][pj].abs() {
                            pivot = Some((i, j));
                        }
                    } else {
                        pivot = Some((i, j));
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        swap_rows(&mut n, &mut u, start, pi);
        let pj = if pj == start { pi } else { pj };
        swap_rows(&mut n, &mut u, start + 1, pj);
        let m = n[start][start + 1];
        debug_assert!(m != 0);
        // clear the pivot row/column pair against the rest
        let mut clean = true;
        for r in (start + 2)..k {
            if n[r][start] != 0 {
                // n[start+1][start] = -m, so row r += q * row(start+1)
                // changes n[r][start] by -q*m.
                let q = div_round(n[r][start], m);
                row_op(&mut n, &mut u, r, start + 1, q);
                if n[r][start] != 0 {
                    clean = false;
                }
            }
            if n[r][start + 1] != 0 {
                let q = div_round(n[r][start + 1], m);
                row_op(&mut n, &mut u, r, start, -q);
                if n[r][start + 1] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            // a smaller entry appeared; rerun pivot selection
            continue;
        }
        if n[start][start + 1].abs() != 1 {
            return Err(Error::Internal(
                "homology pairing is not unimodular on the chosen cycles".into(),
            ));
        }
        if n[start][start + 1] < 0 {
            swap_rows(&mut n, &mut u, start, start + 1);
        }
        start += 2;
    }
    // verify U N0 U^T is exactly hyperbolic blocks + zero radical
    for i in 0..k {
        for j in 0..k {
            let mut s = 0i64;
            for a in 0..k {
                for b in 0..k {
                    s += u[i][a] * n0[a][b] * u[j][b];
                }
            }
            let expected = if i < start && j < start && j == i + 1 && i % 2 == 0 {
                1
            } else if i < start && j < start && i == j + 1 && j % 2 == 0 {
                -1
            } else {
                0
            };
            if s != expected {
                return Err(Error::Internal("symplectic reduction verification failed".into()));
            }
        }
    }
    Ok((u, start))
}

fn div_round(a: i64, b: i64) -> i64 {
    let q = (a as f64) / (b as f64);
    q.round() as i64
}

/// Compute the period matrix over a symplectic basis and validate the
/// Riemann bilinear relations.
pub fn period_matrix(curve: &CurveModel<AlgebraicNumber>, prec: Prec) -> Result<PeriodData> {
    let numerics = CurveNumerics::new(curve, prec)?;
    for attempt in 0..5 {
        match period_matrix_attempt(&numerics, attempt) {
            Ok(pd) => return Ok(pd),
            Err(Error::Internal(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::IllConditioned)
}

fn period_matrix_attempt(numerics: &CurveNumerics, attempt: usize) -> Result<PeriodData> {
    let bits = numerics.bits();
    let mut bps = numerics.branch_points.clone();
    lex_sort(&mut bps);
    let integrand = numerics.integrand();

    // tube radius per loop: distinct fractions of the local clearance
    let mut cycles = Vec::new();
    for i in 0..bps.len() - 1 {
        let e0 = &bps[i];
        let e1 = &bps[i + 1];
        let len = cdist(e0, e1);
        let mut clearance = len.clone();
        for (j, b) in bps.iter().enumerate() {
            if j == i || j == i + 1 {
                continue;
            }
            let d = integrand.dist_seg_to_branch_public(e0, e1, b);
            if d < clearance {
                clearance = d;
            }
        }
        let frac = 0.18 + 0.055 * (i as f64) + 0.013 * (attempt as f64);
        let r = Float::with_val(bits, frac) * &clearance;
        let path = stadium(e0, e1, &r, bits);
        let u_start = poly_eval(&numerics.h, &path[0]).sqrt();
        cycles.push(Cycle { path, u_start });
    }

    // closure check: continuing u around each loop returns to the start
    for c in &cycles {
        let us = integrand.continue_sheet(&c.path, &c.u_start)?;
        let back = us.last().unwrap();
        let d = cdist(back, &c.u_start);
        let scale = cabs(&c.u_start) + Float::with_val(bits, 1e-30);
        if d / scale > Float::with_val(bits, 1e-10) {
            return Err(Error::Internal("cycle continuation failed to close".into()));
        }
    }

    // intersection matrix
    let k = cycles.len();
    let mut nmat = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let v = surface_intersection(&integrand, &cycles[i], &cycles[j])?;
            nmat[i][j] = v;
            nmat[j][i] = -v;
        }
    }

    let (u, rank) = symplectic_basis(&nmat)?;
    if rank != 4 {
        return Err(Error::Internal(format!(
            "cycle lattice has symplectic rank {rank}, expected 4"
        )));
    }

    // periods of the raw loops
    let mut raw: Vec<[Complex; 2]> = Vec::with_capacity(k);
    for c in &cycles {
        let (pair, _) = integrand.along_path(&c.path, &c.u_start)?;
        raw.push([pair.i1, pair.i2]);
    }

    // rows of u: (a1, b1, a2, b2) pairs -> reorder to (a1, a2, b1, b2)
    let order = [0usize, 2, 1, 3];
    let mut pi: CMat24 = [
        [
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
        ],
        [
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
            Complex::with_val(bits, 0),
        ],
    ];
    for (col, &basis_row) in order.iter().enumerate() {
        for form in 0..2 {
            let mut s = Complex::with_val(bits, 0);
            for (loop_idx, coeff) in u[basis_row].iter().enumerate() {
                if *coeff != 0 {
                    s += Complex::with_val(bits, &raw[loop_idx][form] * *coeff as i32);
                }
            }
            pi[form][col] = s;
        }
    }

    let mut pd = PeriodData {
        pi,
        prec: numerics.prec,
        numerics: numerics.clone(),
    };
    // positivity may require swapping the a/b halves
    if !riemann_positive(&pd) {
        let swapped = [2usize, 3, 0, 1];
        let mut pi2 = pd.pi.clone();
        for form in 0..2 {
            for c in 0..4 {
                pi2[form][c] = pd.pi[form][swapped[c]].clone();
            }
        }
        pd.pi = pi2;
    }
    let resid = riemann_residual(&pd);
    let tol = Float::with_val(bits, 10).pow(-(numerics.prec.digits() as i32) + 20);
    if resid > tol || !riemann_positive(&pd) {
        return Err(Error::Internal("Riemann relations failed".into()));
    }
    Ok(pd)
}

/// | Pi J Pi^T | max-entry residual.
pub fn riemann_residual(pd: &PeriodData) -> Float {
    let bits = pd.prec.bits();
    let mut worst = Float::with_val(bits, 0);
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex::with_val(bits, 0);
            for (a, row) in J_STD.iter().enumerate() {
                for (b, &jab) in row.iter().enumerate() {
                    if jab != 0 {
                        s += Complex::with_val(bits, &pd.pi[i][a] * &pd.pi[j][b]) * jab as i32;
                    }
                }
            }
            let v = cabs(&s);
            if v > worst {
                worst = v;
            }
        }
    }
    worst
}

/// Positive definiteness of i * Pi J Pi^H.
pub fn riemann_positive(pd: &PeriodData) -> bool {
    let bits = pd.prec.bits();
    let mut h = [
        [Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
        [Complex::with_val(bits, 0), Complex::with_val(bits, 0)],
    ];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = Complex::with_val(bits, 0);
            for (a, row) in J_STD.iter().enumerate() {
                for (b, &jab) in row.iter().enumerate() {
                    if jab != 0 {
                        let conj = pd.pi[j][b].clone().conj();
                        s += Complex::with_val(bits, &pd.pi[i][a] * &conj) * jab as i32;
                    }
                }
            }
            h[i][j] = s * Complex::with_val(bits, (0, 1));
        }
    }
    let h11 = h[0][0].real().clone();
    let det = Complex::with_val(bits, &h[0][0] * &h[1][1])
        - Complex::with_val(bits, &h[0][1] * &h[1][0]);
    h11 > 0 && det.real().clone() > 0
}

impl CurveIntegrand<'_> {
    /// Distance from one branch point to a segment (exposed for radius choice).
    pub fn dist_seg_to_branch_public(
        &self,
        w0: &Complex,
        w1: &Complex,
        b: &Complex,
    ) -> Float {
        let bits = self.bits;
        let d = Complex::with_val(bits, w1 - w0);
        let dd = cabs(&d);
        if dd.is_zero() {
            return cdist(w0, b);
        }
        let v = Complex::with_val(bits, b - w0);
        let re_part = Float::with_val(bits, v.real() * d.real());
        let im_part = Float::with_val(bits, v.imag() * d.imag());
        let s = (re_part + im_part) / Float::with_val(bits, &dd * &dd);
        let sc = s.clamp(&Float::with_val(bits, 0), &Float::with_val(bits, 1));
        let scaled = Complex::with_val(bits, &d * &sc);
        let proj = Complex::with_val(bits, w0 + scaled);
        cdist(&proj, b)
    }
}
