//! The numeric-to-exact pipeline: sample the analytic endomorphism on
//! low-height curve points, recognize the exact fiber data by lattice
//! reduction, and interpolate the correspondence equations.

use crate::analytic::mpc::cabs;
use crate::analytic::{abel_jacobi, aj_inverse, period_matrix, AJVector, LatticeCtx, PeriodData};
use crate::curves::{Correspondence, CurveModel, ModelKind};
use crate::endo::{endomorphism_lattice, select_generator, RmGenerator};
use crate::error::{Error, Result};
use crate::exact::lll::recognize_k_relation;
use crate::exact::{
    rational_interpolate, AlgebraicNumber, CurveRing, Field, NumberField, Poly, RatFunc,
};
use crate::prec::Prec;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};
use std::sync::Arc;

/// One successful sample: a low-height base point and the numeric fiber pair.
#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub t_p: Rational,
    pub u_p: Complex,
    pub q: (Complex, Complex),
    pub r: (Complex, Complex),
}

/// Exact data recognized from one sample.
#[derive(Clone, Debug)]
pub enum RecognizedSample {
    /// Monic fiber quadratic x^2 + c1 x + c0 and u(Q) = w1 u(P) + w2 u(P) t(Q).
    Quintic {
        t_p: AlgebraicNumber,
        c1: AlgebraicNumber,
        c0: AlgebraicNumber,
        w1: AlgebraicNumber,
        w2: AlgebraicNumber,
    },
    /// Projective F-relation (a0, a1, a2, b0, b1) against (1, x, x^2, u, u x)
    /// and the y-relation u(Q) = a0 + a1 x + (b0 + b1 x) u(P).
    Sextic {
        t_p: AlgebraicNumber,
        f_rel: [AlgebraicNumber; 5],
        y_rel: [AlgebraicNumber; 4],
    },
}

impl RecognizedSample {
    fn t_p(&self) -> &AlgebraicNumber {
        match self {
            RecognizedSample::Quintic { t_p, .. } => t_p,
            RecognizedSample::Sextic { t_p, .. } => t_p,
        }
    }
}

/// The ladder of low-height abscissas used for sampling: integers and
/// half-integers by increasing height.
pub fn sample_abscissas(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count * 2);
    let mut k = 1i64;
    while out.len() < count * 2 && k <= 40 {
        out.push(Rational::from(k));
        out.push(Rational::from(-k));
        out.push(Rational::from((2 * k + 1, 2)));
        out.push(Rational::from((-(2 * k + 1), 2)));
        k += 1;
    }
    out
}

/// Numerically push sample points through the endomorphism: for each t, the
/// pair {Q, R} with AJ(Q) + AJ(R) = T_Omega AJ(P) modulo the lattice.
pub fn sample_endo_images(
    curve: &CurveModel<AlgebraicNumber>,
    pd: &PeriodData,
    gen: &RmGenerator,
    ts: &[Rational],
    wanted: usize,
    seed: u64,
) -> Result<Vec<SampleRecord>> {
    let bits = pd.prec.bits();
    let lattice = LatticeCtx::new(pd);
    let candidates: Vec<(usize, Rational)> = ts.iter().cloned().enumerate().collect();
    let results: Vec<Option<SampleRecord>> = candidates
        .par_iter()
        .map(|(idx, t)| {
            let field = curve.h.ctx().field().clone();
            let t_alg = field.from_rational(t.clone());
            let hv = curve.h.eval(&t_alg);
            if hv.is_zero() {
                return None;
            }
            let t_c = t_alg.embed(pd.prec);
            let u_c = hv.embed(pd.prec).sqrt();
            let aj = abel_jacobi(pd, &t_c, &u_c).ok()?;
            let v = aj.apply_mat(&gen.pair.t_omega);
            let v_red = lattice.reduce(&v);
            if v_red.norm() < Float::with_val(bits, 10).pow(-((pd.prec.digits() / 2) as i32)) {
                return None; // degenerate target
            }
            let pair = aj_inverse(pd, &v_red, seed ^ (*idx as u64)).ok()?;
            Some(SampleRecord {
                t_p: t.clone(),
                u_p: u_c,
                q: pair[0].clone(),
                r: pair[1].clone(),
            })
        })
        .collect();
    let good: Vec<SampleRecord> = results.into_iter().flatten().collect();
    if good.len() < wanted {
        return Err(Error::InsufficientSamples {
            got: good.len(),
            need: wanted,
        });
    }
    Ok(good)
}

/// Recognize the exact fiber relations of one sample by lattice reduction.
pub fn recognize_sample(
    rec: &SampleRecord,
    field: &Arc<NumberField>,
    kind: ModelKind,
    prec: Prec,
) -> Result<RecognizedSample> {
    let bits = prec.bits();
    let guard = 30u32;
    let one = Complex::with_val(bits, 1);
    let t_p = field.from_rational(rec.t_p.clone());
    let (tq, uq) = &rec.q;
    let (tr, ur) = &rec.r;
    match kind {
        ModelKind::Quintic => {
            // symmetric functions of the fiber abscissas
            let s1 = Complex::with_val(bits, tq + tr);
            let s0 = Complex::with_val(bits, tq * tr);
            let c1_val = crate::exact::recognize_algebraic(
                &Complex::with_val(bits, -s1),
                field,
                &rug::Integer::from(10).pow(30),
                prec,
            )?;
            let c0_val = crate::exact::recognize_algebraic(
                &s0,
                field,
                &rug::Integer::from(10).pow(30),
                prec,
            )?;
            // u(Q) = w1 u(P) + w2 u(P) t(Q), pinned by both fiber points
            let rows = vec![
                vec![
                    uq.clone(),
                    rec.u_p.clone(),
                    Complex::with_val(bits, &rec.u_p * tq),
                ],
                vec![
                    ur.clone(),
                    rec.u_p.clone(),
                    Complex::with_val(bits, &rec.u_p * tr),
                ],
            ];
            let rel = recognize_k_relation(&rows, field, prec, guard)?;
            if rel[0].is_zero() {
                return Err(Error::RecognitionFailure);
            }
            let inv = rel[0].inv()?;
            let w1 = rel[1].neg().mul(&inv);
            let w2 = rel[2].neg().mul(&inv);
            // consistency: the recognized quadratic reproduces the floats
            let check = |x: &Complex| -> Float {
                let c1e = c1_val.embed(prec);
                let c0e = c0_val.embed(prec);
                let v = Complex::with_val(bits, x * x)
                    + Complex::with_val(bits, &c1e * x)
                    + c0e;
                cabs(&v)
            };
            let tol = Float::with_val(bits, 10).pow(-(prec.digits() as i32) + guard as i32 + 10);
            if check(tq) > tol || check(tr) > tol {
                return Err(Error::RecognitionFailure);
            }
            Ok(RecognizedSample::Quintic {
                t_p,
                c1: c1_val,
                c0: c0_val,
                w1,
                w2,
            })
        }
        ModelKind::Sextic => {
            // F-relation against (1, x, x^2, u(P), u(P) x), both fiber points
            let row = |x: &Complex| -> Vec<Complex> {
                vec![
                    one.clone(),
                    x.clone(),
                    Complex::with_val(bits, x * x),
                    rec.u_p.clone(),
                    Complex::with_val(bits, &rec.u_p * x),
                ]
            };
            let f_rel_v = recognize_k_relation(&[row(tq), row(tr)], field, prec, guard)?;
            let f_rel: [AlgebraicNumber; 5] = [
                f_rel_v[0].clone(),
                f_rel_v[1].clone(),
                f_rel_v[2].clone(),
                f_rel_v[3].clone(),
                f_rel_v[4].clone(),
            ];
            // y-relation: u(Q) + a0 + a1 x + (b0 + b1 x) u(P) = 0 (sign folded)
            let yrow = |x: &Complex, y: &Complex| -> Vec<Complex> {
                vec![
                    y.clone(),
                    one.clone(),
                    x.clone(),
                    rec.u_p.clone(),
                    Complex::with_val(bits, &rec.u_p * x),
                ]
            };
            let y_rel_v =
                recognize_k_relation(&[yrow(tq, uq), yrow(tr, ur)], field, prec, guard)?;
            if y_rel_v[0].is_zero() {
                return Err(Error::RecognitionFailure);
            }
            let inv = y_rel_v[0].inv()?;
            let y_rel = [
                y_rel_v[1].neg().mul(&inv),
                y_rel_v[2].neg().mul(&inv),
                y_rel_v[3].neg().mul(&inv),
                y_rel_v[4].neg().mul(&inv),
            ];
            Ok(RecognizedSample::Sextic { t_p, f_rel, y_rel })
        }
    }
}

/// Interpolate the recognized per-sample data into a correspondence with
/// rational-function coefficients, verifying y^2 = h(x) exactly.
pub fn interpolate_correspondence(
    samples: &[RecognizedSample],
    curve: &CurveModel<AlgebraicNumber>,
    deg_bound: usize,
    disc: i64,
) -> Result<Correspondence<AlgebraicNumber>> {
    let zero = curve.h.ctx().zero_like();
    let need = 2 * deg_bound + 2;
    if samples.len() < need {
        return Err(Error::InsufficientSamples {
            got: samples.len(),
            need,
        });
    }
    let ring = CurveRing::new(curve.h.clone());
    let interp = |pick: &dyn Fn(&RecognizedSample) -> AlgebraicNumber| -> Result<RatFunc<AlgebraicNumber>> {
        let pts: Vec<(AlgebraicNumber, AlgebraicNumber)> = samples
            .iter()
            .map(|s| (s.t_p().clone(), pick(s)))
            .collect();
        rational_interpolate(&pts, deg_bound, deg_bound)
    };
    match samples[0] {
        RecognizedSample::Quintic { .. } => {
            let get = |f: fn(&RecognizedSample) -> AlgebraicNumber| f;
            let c1 = interp(&get(|s| match s {
                RecognizedSample::Quintic { c1, .. } => c1.clone(),
                _ => unreachable!(),
            }))?;
            let c0 = interp(&get(|s| match s {
                RecognizedSample::Quintic { c0, .. } => c0.clone(),
                _ => unreachable!(),
            }))?;
            let w1 = interp(&get(|s| match s {
                RecognizedSample::Quintic { w1, .. } => w1.clone(),
                _ => unreachable!(),
            }))?;
            let w2 = interp(&get(|s| match s {
                RecognizedSample::Quintic { w2, .. } => w2.clone(),
                _ => unreachable!(),
            }))?;
            // clear denominators of the monic quadratic
            let den = lcm_poly(&lcm_poly(&c1.den().clone(), c0.den())?, &Poly::one(&zero))?;
            let f2 = ring.from_ratfunc(RatFunc::from_poly(den.clone()));
            let f1 = ring.from_ratfunc(c1.mul(&RatFunc::from_poly(den.clone())));
            let f0 = ring.from_ratfunc(c0.mul(&RatFunc::from_poly(den)));
            let y0 = ring.elem(RatFunc::zero(&zero), w1);
            let y1 = ring.elem(RatFunc::zero(&zero), w2);
            let corr = Correspondence::new(curve.clone(), f2, f1, f0, y0, y1, disc)?;
            crate::curves::normalize_correspondence(&corr)
        }
        RecognizedSample::Sextic { .. } => {
            // normalize the projective F-relation by the x^2 coefficient
            let a2_first = match &samples[0] {
                RecognizedSample::Sextic { f_rel, .. } => f_rel[2].clone(),
                _ => unreachable!(),
            };
            if a2_first.is_zero() {
                return Err(Error::RecognitionFailure);
            }
            let ratio = |idx: usize| -> Result<RatFunc<AlgebraicNumber>> {
                let pts: Result<Vec<(AlgebraicNumber, AlgebraicNumber)>> = samples
                    .iter()
                    .map(|s| match s {
                        RecognizedSample::Sextic { t_p, f_rel, .. } => {
                            if f_rel[2].is_zero() {
                                return Err(Error::RecognitionFailure);
                            }
                            Ok((t_p.clone(), f_rel[idx].mul(&f_rel[2].inv()?)))
                        }
                        _ => unreachable!(),
                    })
                    .collect();
                rational_interpolate(&pts?, deg_bound, deg_bound)
            };
            let r0 = ratio(0)?;
            let r1 = ratio(1)?;
            let rb0 = ratio(3)?;
            let rb1 = ratio(4)?;
            let yco = |idx: usize| -> Result<RatFunc<AlgebraicNumber>> {
                let pts: Vec<(AlgebraicNumber, AlgebraicNumber)> = samples
                    .iter()
                    .map(|s| match s {
                        RecognizedSample::Sextic { t_p, y_rel, .. } => {
                            (t_p.clone(), y_rel[idx].clone())
                        }
                        _ => unreachable!(),
                    })
                    .collect();
                rational_interpolate(&pts, deg_bound, deg_bound)
            };
            let a0 = yco(0)?;
            let a1 = yco(1)?;
            let b0 = yco(2)?;
            let b1 = yco(3)?;
            // clear denominators of the F coefficients
            let mut den = Poly::one(&zero);
            for rf in [&r0, &r1, &rb0, &rb1] {
                den = lcm_poly(&den, rf.den())?;
            }
            let den_rf = RatFunc::from_poly(den.clone());
            let f2 = ring.from_ratfunc(den_rf.clone());
            let f1 = ring.elem(r1.mul(&den_rf), rb1.mul(&den_rf));
            let f0 = ring.elem(r0.mul(&den_rf), rb0.mul(&den_rf));
            let y0 = ring.elem(a0, b0);
            let y1 = ring.elem(a1, b1);
            let corr = Correspondence::new(curve.clone(), f2, f1, f0, y0, y1, disc)?;
            crate::curves::normalize_correspondence(&corr)
        }
    }
}

fn lcm_poly(
    a: &Poly<AlgebraicNumber>,
    b: &Poly<AlgebraicNumber>,
) -> Result<Poly<AlgebraicNumber>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::DivisionByZero("lcm of zero polynomial"));
    }
    let g = a.gcd(b)?;
    a.mul(&b.div_exact(&g)?).monic()
}

/// Discovery settings.
#[derive(Clone, Debug)]
pub struct DiscoverySettings {
    pub prec: Prec,
    pub n_samples: usize,
    pub seed: u64,
    pub flip_sign: bool,
}

impl Default for DiscoverySettings {
    fn default() -> Self {
        DiscoverySettings {
            prec: Prec(400),
            n_samples: 0, // 0 = derive from the degree bound
            seed: 0,
            flip_sign: false,
        }
    }
}

/// The full discovery pipeline: periods, endomorphism ring, trace-minimal
/// generator, sampling, recognition and interpolation.
pub fn discover(
    curve: &CurveModel<AlgebraicNumber>,
    d_target: i64,
    settings: &DiscoverySettings,
) -> Result<Correspondence<AlgebraicNumber>> {
    let pd = period_matrix(curve, settings.prec)?;
    let basis = endomorphism_lattice(&pd)?;
    let gen = select_generator(&basis, d_target, &pd, settings.flip_sign)?;
    discover_with_generator(curve, &pd, &gen, d_target, settings)
}

/// Discovery with an externally chosen analytic generator (used by the family
/// pipeline, which pins the generator to a constant diagonal action).
pub fn discover_with_generator(
    curve: &CurveModel<AlgebraicNumber>,
    pd: &PeriodData,
    gen: &RmGenerator,
    d_target: i64,
    settings: &DiscoverySettings,
) -> Result<Correspondence<AlgebraicNumber>> {
    let field = curve.h.ctx().field().clone();
    let max_bound = ((gen.trace * gen.trace - 2 * gen.norm).unsigned_abs() as usize).max(3) + 2;
    let wanted = if settings.n_samples > 0 {
        settings.n_samples
    } else {
        2 * max_bound + 4
    };
    let ts = sample_abscissas(wanted + 8);
    let records = sample_endo_images(curve, pd, gen, &ts, wanted.min(ts.len()), settings.seed)?;
    let mut recognized = Vec::new();
    for rec in &records {
        match recognize_sample(rec, &field, curve.kind, pd.prec) {
            Ok(r) => recognized.push(r),
            Err(Error::RecognitionFailure) => continue,
            Err(e) => return Err(e),
        }
    }
    // adaptive degree escalation
    let mut bound = 2usize;
    loop {
        if 2 * bound + 2 <= recognized.len() {
            match interpolate_correspondence(&recognized, curve, bound, d_target) {
                Ok(corr) => return Ok(corr),
                Err(Error::NoFunctionOfThisDegree)
                | Err(Error::AmbiguousDegree)
                | Err(Error::InterpolationInconsistency) => {}
                Err(e) => return Err(e),
            }
        }
        bound += 1;
        if bound > max_bound.max(10) {
            return Err(Error::InterpolationInconsistency);
        }
        if 2 * bound + 2 > recognized.len() {
            return Err(Error::InsufficientSamples {
                got: recognized.len(),
                need: 2 * bound + 2,
            });
        }
    }
}

/// Pick the analytic generator whose T_Omega is (numerically) the constant
/// diagonal diag(gamma', gamma): the continuity normalization that makes
/// per-fiber discoveries glue into a family.
pub fn select_diagonal_generator(
    basis: &[crate::endo::EndoPair],
    pd: &PeriodData,
    gamma: &Complex,
    gamma_conj: &Complex,
    trace: i64,
    norm: i64,
) -> Result<crate::endo::RmGenerator> {
    use crate::endo::{endo_residual, t_omega_from_tz, EndoPair, RmGenerator};
    let bits = pd.prec.bits();
    let tol = Float::with_val(bits, 1e-12);
    let close = |a: &Complex, b: &Complex| -> bool {
        cabs(&Complex::with_val(bits, a - b)) < tol
    };
    let is_scalar = |m: &[[i64; 4]; 4]| -> bool {
        let d = m[0][0];
        (0..4).all(|i| (0..4).all(|j| m[i][j] == if i == j { d } else { 0 }))
    };
    for b in basis {
        if is_scalar(&b.t_z) {
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
                let Some(t_omega) = t_omega_from_tz(pd, &cand) else {
                    continue;
                };
                if cabs(&t_omega[0][1]) >= tol || cabs(&t_omega[1][0]) >= tol {
                    continue;
                }
                if close(&t_omega[1][1], gamma) && close(&t_omega[0][0], gamma_conj) {
                    let pair = EndoPair { t_z: cand, t_omega };
                    let resid_tol =
                        Float::with_val(bits, 10).pow(-(pd.prec.digits() as i32) + 50);
                    if endo_residual(pd, &pair) < resid_tol {
                        return Ok(RmGenerator {
                            pair,
                            trace,
                            norm,
                            disc: trace * trace - 4 * norm,
                        });
                    }
                }
            }
        }
    }
    Err(Error::NotRmByD(trace * trace - 4 * norm))
}

/// Per-fiber monic-form data: the eight rational functions of t (both parts
/// of the monic quadratic's coefficients and of y) that glue into the family.
fn fiber_slots(
    corr: &Correspondence<AlgebraicNumber>,
) -> Result<[RatFunc<AlgebraicNumber>; 8]> {
    let f2i = corr.f2.inv()?;
    let c1 = corr.f1.mul(&f2i);
    let c0 = corr.f0.mul(&f2i);
    Ok([
        c1.a.clone(),
        c1.b.clone(),
        c0.a.clone(),
        c0.b.clone(),
        corr.y0.a.clone(),
        corr.y0.b.clone(),
        corr.y1.a.clone(),
        corr.y1.b.clone(),
    ])
}

/// Two-stage rational interpolation over the parameter plane: in q at each
/// fixed p, then in p over the inner function field.
pub fn interpolate_pq(
    samples: &[(AlgebraicNumber, AlgebraicNumber, AlgebraicNumber)],
    bp: usize,
    bq: usize,
) -> Result<crate::disc5::Fpq> {
    use std::collections::BTreeMap;
    let mut by_p: BTreeMap<String, (AlgebraicNumber, Vec<(AlgebraicNumber, AlgebraicNumber)>)> =
        BTreeMap::new();
    for (p, q, v) in samples {
        by_p
            .entry(format!("{p:?}"))
            .or_insert_with(|| (p.clone(), Vec::new()))
            .1
            .push((q.clone(), v.clone()));
    }
    let mut outer: Vec<(crate::disc5::Fq, crate::disc5::Fq)> = Vec::new();
    for (_, (p, pts)) in by_p {
        if pts.len() < 2 * bq + 2 {
            return Err(Error::InsufficientSamples {
                got: pts.len(),
                need: 2 * bq + 2,
            });
        }
        let g = rational_interpolate(&pts, bq, bq)?;
        outer.push((RatFunc::constant(p), g));
    }
    rational_interpolate(&outer, bp, bp)
}

fn interp_adaptive(
    pts: &[(AlgebraicNumber, AlgebraicNumber, AlgebraicNumber)],
) -> Result<crate::disc5::Fpq> {
    for b in 1..=5usize {
        match interpolate_pq(pts, b, b) {
            Ok(v) => return Ok(v),
            Err(Error::NoFunctionOfThisDegree)
            | Err(Error::AmbiguousDegree)
            | Err(Error::InsufficientSamples { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InterpolationInconsistency)
}

/// Rediscover the discriminant-5 family correspondence over an evaluation
/// grid; coefficients come back in the (p, q) function field.
pub fn discover_family(
    ps: &[Rational],
    qs: &[Rational],
    settings: &DiscoverySettings,
) -> Result<Correspondence<crate::disc5::Fpq>> {
    use crate::disc5::{disc5_curve, disc5_field, family_h, Fpq};
    let field = disc5_field();
    let two_inv = field.from_i64(2).inv()?;
    let gamma_exact = field.one().add(&field.gen()).mul(&two_inv);
    let gamma_conj_exact = field.one().sub(&field.gen()).mul(&two_inv);
    let gamma = gamma_exact.embed(settings.prec);
    let gamma_conj = gamma_conj_exact.embed(settings.prec);
    let fibers: Vec<(Rational, Rational)> = ps
        .iter()
        .flat_map(|p| qs.iter().map(move |q| (p.clone(), q.clone())))
        .collect();
    type Slot = (AlgebraicNumber, AlgebraicNumber, [RatFunc<AlgebraicNumber>; 8]);
    let results: Vec<Result<Slot>> = fibers
        .par_iter()
        .map(|(pr, qr)| {
            let p0 = field.from_rational(pr.clone());
            let q0 = field.from_rational(qr.clone());
            let curve = disc5_curve(&p0, &q0)?;
            let pd = period_matrix(&curve, settings.prec)?;
            let basis = endomorphism_lattice(&pd)?;
            let gen = select_diagonal_generator(&basis, &pd, &gamma, &gamma_conj, 1, -1)?;
            let corr = discover_with_generator(&curve, &pd, &gen, 5, settings)?;
            let slots = fiber_slots(&corr)?;
            Ok((p0, q0, slots))
        })
        .collect();
    let good: Vec<&Slot> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    if good.len() < 30 {
        return Err(Error::InsufficientSamples {
            got: good.len(),
            need: 30,
        });
    }
    // uniform shapes per slot: majority (deg num, deg den) signature
    let zero = field.zero();
    let zq: crate::disc5::Fq = RatFunc::constant(zero.clone());
    let zpq: Fpq = RatFunc::constant(zq);
    let mut family_slots: Vec<RatFunc<Fpq>> = Vec::with_capacity(8);
    for slot in 0..8 {
        use std::collections::HashMap;
        let mut shapes: HashMap<(i64, i64), usize> = HashMap::new();
        for (_, _, slots) in &good {
            let rf = &slots[slot];
            *shapes
                .entry((rf.num().deg_i(), rf.den().deg_i()))
                .or_insert(0) += 1;
        }
        let (&(nd, dd), _) = shapes
            .iter()
            .max_by_key(|(_, &c)| c)
            .ok_or(Error::InterpolationInconsistency)?;
        let conforming: Vec<&Slot> = good
            .iter()
            .filter(|(_, _, s)| s[slot].num().deg_i() == nd && s[slot].den().deg_i() == dd)
            .copied()
            .collect();
        let coeff_fn = |take_num: bool, k: usize| -> Result<Fpq> {
            let pts: Vec<(AlgebraicNumber, AlgebraicNumber, AlgebraicNumber)> = conforming
                .iter()
                .map(|(p, q, s)| {
                    let rf = &s[slot];
                    let c = if take_num {
                        rf.num().coeff(k)
                    } else {
                        rf.den().coeff(k)
                    };
                    (p.clone(), q.clone(), c)
                })
                .collect();
            interp_adaptive(&pts)
        };
        let mut num_coeffs: Vec<Fpq> = Vec::new();
        for k in 0..=nd.max(0) as usize {
            num_coeffs.push(coeff_fn(true, k)?);
        }
        if nd < 0 {
            num_coeffs.clear();
        }
        let mut den_coeffs: Vec<Fpq> = Vec::new();
        for k in 0..dd.max(0) as usize {
            den_coeffs.push(coeff_fn(false, k)?);
        }
        den_coeffs.push(zpq.one_like());
        let num = Poly::new(&zpq, num_coeffs);
        let den = Poly::new(&zpq, den_coeffs);
        family_slots
            .push(RatFunc::new(num, den).map_err(|_| Error::InterpolationInconsistency)?);
    }
    // assemble over the family curve: clear the monic form by the lcm of the
    // F-coefficient denominators
    let h = family_h();
    let fam_curve = crate::curves::validate_curve(h.clone())?;
    let ring = CurveRing::new(h);
    let c1 = ring.elem(family_slots[0].clone(), family_slots[1].clone());
    let c0 = ring.elem(family_slots[2].clone(), family_slots[3].clone());
    let y0 = ring.elem(family_slots[4].clone(), family_slots[5].clone());
    let y1 = ring.elem(family_slots[6].clone(), family_slots[7].clone());
    let mut den = Poly::one(&zpq);
    for rf in [&c1.a, &c1.b, &c0.a, &c0.b] {
        let g = den.gcd(rf.den())?;
        den = den.mul(&rf.den().div_exact(&g)?);
    }
    let dl = RatFunc::from_poly(den);
    let f2 = ring.from_ratfunc(dl.clone());
    let f1 = ring.elem(c1.a.mul(&dl), c1.b.mul(&dl));
    let f0 = ring.elem(c0.a.mul(&dl), c0.b.mul(&dl));
    Correspondence::new(fam_curve, f2, f1, f0, y0, y1, 5)
}
