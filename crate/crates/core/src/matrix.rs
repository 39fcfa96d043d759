//! Small dense integer matrices, used both over Z and over F_p.
//!
//! Entries are `i64`. Routines with a `_mod` suffix interpret the entries as
//! residues modulo a prime `p < 2^31` and return canonical representatives in
//! `[0, p)`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

pub fn reduce(x: i64, p: u64) -> i64 {
    x.rem_euclid(p as i64)
}

pub fn inv_mod(x: i64, p: u64) -> Option<i64> {
    let x = reduce(x, p);
    if x == 0 {
        return None;
    }
    // Fermat: x^(p-2)
    let (mut base, mut exp, mut acc) = (x, p - 2, 1i64);
    let p = p as i64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    Some(acc)
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn scalar(x: i64) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Determinant over Z by cofactor expansion (only meant for tiny sizes).
    pub fn det(&self) -> i64 {
        assert!(self.is_square());
        match self.rows {
            0 => 1,
            1 => self.data[0],
            2 => self.data[0] * self.data[3] - self.data[1] * self.data[2],
            n => (0..n)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    sign * self[(0, j)] * self.minor(0, j).det()
                })
                .sum(),
        }
    }

    fn minor(&self, row: usize, col: usize) -> Matrix {
        let mut rows = Vec::with_capacity(self.rows - 1);
        for i in (0..self.rows).filter(|&i| i != row) {
            let r: Vec<i64> = (0..self.cols).filter(|&j| j != col).map(|j| self[(i, j)]).collect();
            rows.push(r);
        }
        if rows.is_empty() {
            return Matrix::zeros(0, 0);
        }
        Matrix::from_rows(&rows)
    }

    fn adjugate(&self) -> Matrix {
        let n = self.rows;
        let mut adj = Matrix::zeros(n, n);
        if n == 1 {
            adj[(0, 0)] = 1;
            return adj;
        }
        for i in 0..n {
            for j in 0..n {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[(j, i)] = sign * self.minor(i, j).det();
            }
        }
        adj
    }

    /// Inverse over Z, which exists iff the determinant is ±1.
    pub fn inverse_unimodular(&self) -> Option<Matrix> {
        match self.det() {
            1 => Some(self.adjugate()),
            -1 => Some(self.adjugate().neg()),
            _ => None,
        }
    }

    pub fn reduce_mod(&self, p: u64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| reduce(x, p)).collect() }
    }

    pub fn mul_mod(&self, other: &Matrix, p: u64) -> Matrix {
        self.reduce_mod(p).mul(&other.reduce_mod(p)).reduce_mod(p)
    }

    /// Reduced row echelon form over F_p together with the pivot columns.
    pub fn rref_mod(&self, p: u64) -> (Matrix, Vec<usize>) {
        let mut m = self.reduce_mod(p);
        let pi = p as i64;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pivot) = (r..m.rows).find(|&i| m[(i, c)] != 0) else {
                continue;
            };
            m.swap_rows(r, pivot);
            let inv = inv_mod(m[(r, c)], p).expect("nonzero residue is invertible");
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)] * inv % pi;
            }
            for i in (0..m.rows).filter(|&i| i != r) {
                let f = m[(i, c)];
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    m[(i, j)] = reduce(m[(i, j)] - f * m[(r, j)], p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank_mod(&self, p: u64) -> usize {
        self.rref_mod(p).1.len()
    }

    pub fn det_mod(&self, p: u64) -> i64 {
        reduce(self.reduce_mod(p).det_bareiss_mod(p), p)
    }

    fn det_bareiss_mod(&self, p: u64) -> i64 {
        let n = self.rows;
        let mut m = self.clone();
        let pi = p as i64;
        let mut det = 1i64;
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&i| m[(i, c)] != 0) else {
                return 0;
            };
            if pivot != c {
                m.swap_rows(c, pivot);
                det = reduce(-det, p);
            }
            det = det * m[(c, c)] % pi;
            let inv = inv_mod(m[(c, c)], p).expect("nonzero residue is invertible");
            for i in c + 1..n {
                let f = m[(i, c)] * inv % pi;
                for j in c..n {
                    m[(i, j)] = reduce(m[(i, j)] - f * m[(c, j)], p);
                }
            }
        }
        det
    }

    pub fn inverse_mod(&self, p: u64) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let (r, pivots) = aug.rref_mod(p);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)];
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.row_vectors())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
