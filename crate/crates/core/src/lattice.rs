//! Hermite normal form for full-rank sublattices of Z^r.
//!
//! Lattices are spanned by row vectors. The normal form is upper triangular
//! with positive diagonal and every entry above a pivot reduced into
//! `[0, pivot)`, which makes it a canonical label for the lattice.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// HNF basis of the lattice spanned by `generators` in Z^r.
pub fn hermite_normal_form(generators: &[Vec<i64>], r: usize) -> Result<Matrix> {
    let mut rows: Vec<Vec<i64>> = generators.to_vec();
    if rows.iter().any(|v| v.len() != r) {
        return Err(Error::DimensionMismatch(format!("generators must have length {r}")));
    }
    let mut basis: Vec<Vec<i64>> = Vec::with_capacity(r);
    for c in 0..r {
        // fold every remaining generator into a single pivot row for column c
        let mut pivot: Option<Vec<i64>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for v in rows.drain(..) {
            if v[c] == 0 {
                rest.push(v);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(v),
                Some(u) => {
                    let (g, x, y) = ext_gcd(u[c], v[c]);
                    let (su, sv) = (u[c] / g, v[c] / g);
                    let new_pivot: Vec<i64> = u.iter().zip(&v).map(|(a, b)| x * a + y * b).collect();
                    let killed: Vec<i64> = u.iter().zip(&v).map(|(a, b)| sv * a - su * b).collect();
                    pivot = Some(new_pivot);
                    if killed.iter().any(|&e| e != 0) {
                        rest.push(killed);
                    }
                }
            }
        }
        let Some(mut p) = pivot else {
            return Err(Error::InvalidParameter("lattice is not of full rank".into()));
        };
        if p[c] < 0 {
            p.iter_mut().for_each(|e| *e = -*e);
        }
        basis.push(p);
        rows = rest;
    }
    for c in 0..r {
        let d = basis[c][c];
        for i in 0..c {
            let q = basis[i][c].div_euclid(d);
            if q != 0 {
                let pivot_row = basis[c].clone();
                for (e, pe) in basis[i].iter_mut().zip(&pivot_row) {
                    *e -= q * pe;
                }
            }
        }
    }
    Ok(Matrix::from_rows(&basis))
}

pub fn is_hnf(m: &Matrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let r = m.rows();
    for i in 0..r {
        if m[(i, i)] <= 0 {
            return false;
        }
        for j in 0..i {
            if m[(i, j)] != 0 {
                return false;
            }
        }
        for k in 0..i {
            if m[(k, i)] < 0 || m[(k, i)] >= m[(i, i)] {
                return false;
            }
        }
    }
    true
}

/// Whether `v` lies in the lattice with HNF basis `h`.
pub fn contains(h: &Matrix, v: &[i64]) -> bool {
    let mut v = v.to_vec();
    for i in 0..h.rows() {
        let d = h[(i, i)];
        if v[i] % d != 0 {
            return false;
        }
        let q = v[i] / d;
        for (j, e) in v.iter_mut().enumerate() {
            *e -= q * h[(i, j)];
        }
    }
    v.iter().all(|&e| e == 0)
}
