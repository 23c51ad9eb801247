//! Exact dense linear algebra over any `Field`: elimination, solving,
//! null spaces. Sizes here are tiny (tens of rows), so fraction growth is
//! acceptable.

use super::field::Field;
use crate::error::{Error, Result};

/// Reduced row echelon form; returns pivot column indices.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("pivot nonzero");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&sub);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right null space of the matrix.
pub fn null_space<F: Field>(m: &[Vec<F>], zero: &F) -> Vec<Vec<F>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![zero.zero_like(); cols];
        v[fc] = zero.one_like();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = work[ri][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = b; error when inconsistent or underdetermined.
pub fn solve<F: Field>(m: &[Vec<F>], b: &[F], zero: &F) -> Result<Vec<F>> {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut aug: Vec<Vec<F>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return Err(Error::Internal("inconsistent linear system".into()));
    }
    if pivots.len() < cols {
        return Err(Error::AmbiguousDegree);
    }
    let mut x = vec![zero.zero_like(); cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[ri][cols].clone();
    }
    Ok(x)
}

/// 2x2 determinant helper.
pub fn det2<F: Field>(m: &[[F; 2]; 2]) -> F {
    m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
}
