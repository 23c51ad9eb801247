//! Path integration of the genus-2 one-forms (dt/u, t dt/u) with continuous
//! sheet tracking of u = sqrt(h(t)) along polygonal paths.

use super::mpc::{cabs, cdist, poly_eval, sqrt_matched};
use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use rug::ops::Pow;
use rug::{Complex, Float};

pub struct CurveIntegrand<'a> {
    pub h: &'a [Complex],
    pub branch_points: &'a [Complex],
    pub bits: u32,
    pub digits: u32,
}

#[derive(Clone, Debug)]
pub struct PairIntegral {
    pub i1: Complex,
    pub i2: Complex,
}

impl PairIntegral {
    fn zero(bits: u32) -> Self {
        PairIntegral {
            i1: Complex::with_val(bits, 0),
            i2: Complex::with_val(bits, 0),
        }
    }

    fn add(&mut self, other: &PairIntegral) {
        self.i1 += &other.i1;
        self.i2 += &other.i2;
    }

    pub fn dist(&self, other: &PairIntegral) -> Float {
        let d1 = cdist(&self.i1, &other.i1);
        let d2 = cdist(&self.i2, &other.i2);
        if d1 > d2 {
            d1
        } else {
            d2
        }
    }
}

impl<'a> CurveIntegrand<'a> {
    /// Distance from a point to the branch set.
    fn dist_to_branch(&self, z: &Complex) -> Float {
        let mut best = Float::with_val(self.bits, 1e300);
        for b in self.branch_points {
            let d = cdist(z, b);
            if d < best {
                best = d;
            }
        }
        best
    }

    /// Distance from a segment to the branch set (sampled; a lower-bound
    /// refinement via endpoint projection).
    fn dist_seg_to_branch(&self, w0: &Complex, w1: &Complex) -> Float {
        let bits = self.bits;
        let mut best = Float::with_val(bits, 1e300);
        for b in self.branch_points {
            // project b onto the segment
            let d = Complex::with_val(bits, w1 - w0);
            let dd = cabs(&d);
            if dd.is_zero() {
                let e = cdist(w0, b);
                if e < best {
                    best = e;
                }
                continue;
            }
            let v = Complex::with_val(bits, b - w0);
            // s = Re(v * conj(d)) / |d|^2 clamped to [0,1]
            let re_part = Float::with_val(bits, v.real() * d.real());
            let im_part = Float::with_val(bits, v.imag() * d.imag());
            let s = (re_part + im_part) / Float::with_val(bits, &dd * &dd);
            let sc = s.clamp(&Float::with_val(bits, 0), &Float::with_val(bits, 1));
            let scaled = Complex::with_val(bits, &d * &sc);
            let proj = Complex::with_val(bits, w0 + scaled);
            let e = cdist(&proj, b);
            if e < best {
                best = e;
            }
        }
        best
    }

    /// One Gauss pass along [w0, w1] starting from sheet u0 at w0.
    /// Returns the integral pair and u at w1.
    fn gauss_pass(
        &self,
        w0: &Complex,
        w1: &Complex,
        u0: &Complex,
        n: usize,
    ) -> (PairIntegral, Complex) {
        let bits = self.bits;
        let (nodes, weights) = &*gauss_legendre(n, bits);
        let mid = Complex::with_val(bits, w0 + w1) / 2u32;
        let half = Complex::with_val(bits, w1 - w0) / 2u32;
        let mut acc = PairIntegral::zero(bits);
        let mut u_prev = u0.clone();
        for (x, w) in nodes.iter().zip(weights) {
            let t = Complex::with_val(bits, &mid + Complex::with_val(bits, &half * x));
            let hv = poly_eval(self.h, &t);
            let u = sqrt_matched(&hv, &u_prev);
            let base = Complex::with_val(bits, &half / &u);
            let term1 = Complex::with_val(bits, &base * w);
            acc.i1 += &term1;
            acc.i2 += Complex::with_val(bits, &term1 * &t);
            u_prev = u;
        }
        let u_end = sqrt_matched(&poly_eval(self.h, w1), &u_prev);
        (acc, u_end)
    }

    /// Adaptive integration of one straight segment with sheet continuation.
    fn segment(
        &self,
        w0: &Complex,
        w1: &Complex,
        u0: &Complex,
        depth: u32,
    ) -> Result<(PairIntegral, Complex)> {
        let bits = self.bits;
        let len = cdist(w0, w1);
        if len.is_zero() {
            return Ok((PairIntegral::zero(bits), u0.clone()));
        }
        // keep subsegments short relative to the branch distance
        let d = self.dist_seg_to_branch(w0, w1);
        if d.is_zero() {
            return Err(Error::IllConditioned);
        }
        if depth < 64 && len > Float::with_val(bits, 0.4) * &d {
            let mid = Complex::with_val(bits, w0 + w1) / 2u32;
            let (a, umid) = self.segment(w0, &mid, u0, depth + 1)?;
            let (b, uend) = self.segment(&mid, w1, &umid, depth + 1)?;
            let mut s = a;
            s.add(&b);
            return Ok((s, uend));
        }
        let n = self.base_order();
        let (coarse, _) = self.gauss_pass(w0, w1, u0, n);
        // refinement check: two halves at the same order
        let mid = Complex::with_val(bits, w0 + w1) / 2u32;
        let (fa, uma) = self.gauss_pass(w0, &mid, u0, n);
        let (fb, ufin) = self.gauss_pass(&mid, w1, &uma, n);
        let mut fine = fa;
        fine.add(&fb);
        let tol = Float::with_val(bits, 10).pow(-(self.digits as i32) - 10)
            * (Float::with_val(bits, 1) + cabs(&fine.i1) + cabs(&fine.i2));
        if coarse.dist(&fine) < tol || depth >= 64 {
            Ok((fine, ufin))
        } else {
            let (a, umid) = self.segment(w0, &mid, u0, depth + 1)?;
            let (b, uend) = self.segment(&mid, w1, &umid, depth + 1)?;
            let mut s = a;
            s.add(&b);
            Ok((s, uend))
        }
    }

    fn base_order(&self) -> usize {
        ((self.digits as usize) / 2 + 24).min(640)
    }

    /// Integrate along a polygonal path; u0 is the sheet at path[0].
    /// Returns the integrals and the continued u at the final waypoint.
    pub fn along_path(
        &self,
        path: &[Complex],
        u0: &Complex,
    ) -> Result<(PairIntegral, Complex)> {
        let bits = self.bits;
        let mut acc = PairIntegral::zero(bits);
        let mut u = u0.clone();
        for leg in path.windows(2) {
            let (part, u_next) = self.segment(&leg[0], &leg[1], &u, 0)?;
            acc.add(&part);
            u = u_next;
        }
        Ok((acc, u))
    }

    /// Sheet continuation only (no integrals), with explicit small steps;
    /// returns u at every waypoint of the path.
    pub fn continue_sheet(&self, path: &[Complex], u0: &Complex) -> Result<Vec<Complex>> {
        let bits = self.bits;
        let mut out = Vec::with_capacity(path.len());
        let mut u = u0.clone();
        out.push(u.clone());
        for leg in path.windows(2) {
            let len = cdist(&leg[0], &leg[1]);
            let d = self.dist_seg_to_branch(&leg[0], &leg[1]);
            if d.is_zero() {
                return Err(Error::IllConditioned);
            }
            let ratio = Float::with_val(bits, &len / &d).to_f64();
            let steps = (ratio * 8.0).ceil().max(1.0) as usize;
            let dvec = Complex::with_val(bits, &leg[1] - &leg[0]);
            for k in 1..=steps {
                let s = Float::with_val(bits, k as f64 / steps as f64);
                let step = Complex::with_val(bits, &dvec * &s);
                let t = Complex::with_val(bits, &leg[0] + step);
                let hv = poly_eval(self.h, &t);
                u = sqrt_matched(&hv, &u);
            }
            out.push(u.clone());
        }
        Ok(out)
    }
}
