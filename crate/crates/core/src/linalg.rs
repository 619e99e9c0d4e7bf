//! Exact dense linear algebra over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{dot, format_q, zeros, Q, QVec};

/// Row-major rational matrix. Keeps its column count even with zero rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    ncols: usize,
    rows: Vec<QVec>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix{}x{}[", self.nrows(), self.ncols)?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let parts: Vec<String> = row.iter().map(format_q).collect();
            write!(f, "{}", parts.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn from_rows(ncols: usize, rows: Vec<QVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self { ncols, rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(ncols, rows.iter().map(|r| crate::rational::qvec(r)).collect())
    }

    pub fn empty(ncols: usize) -> Self {
        Self { ncols, rows: Vec::new() }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { ncols, rows: vec![zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Q::one();
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, cols: &[QVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows);
            for (row, x) in m.rows.iter_mut().zip(c) {
                row[j] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVec {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<QVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.rows[i][j] = v;
    }

    pub fn column(&self, j: usize) -> QVec {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<QVec> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn push_row(&mut self, row: QVec) {
        assert_eq!(row.len(), self.ncols);
        self.rows.push(row);
    }

    pub fn transpose(&self) -> Self {
        Self::from_columns(self.ncols, &self.rows)
    }

    pub fn mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(v.len(), self.ncols, "mul_vec dimension");
        self.rows.iter().map(|r| dot(r, v)).collect()
    }

    /// `selfᵀ v`
    pub fn tr_mul_vec(&self, v: &[Q]) -> QVec {
        assert_eq!(v.len(), self.nrows());
        let mut out = zeros(self.ncols);
        for (r, s) in self.rows.iter().zip(v) {
            if s.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(r) {
                *o += a * s;
            }
        }
        out
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols, other.nrows(), "mul dimension");
        let cols = other.columns();
        let rows = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|c| dot(r, c)).collect())
            .collect();
        QMatrix { ncols: other.ncols, rows }
    }

    /// Columns `range` of every row.
    pub fn column_block(&self, start: usize, end: usize) -> QMatrix {
        QMatrix {
            ncols: end - start,
            rows: self.rows.iter().map(|r| r[start..end].to_vec()).collect(),
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        QMatrix { ncols: self.ncols, rows: idx.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols, other.ncols, "vstack");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        QMatrix { ncols: self.ncols, rows }
    }

    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.nrows(), other.nrows(), "hstack");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        QMatrix { ncols: self.ncols + other.ncols, rows }
    }

    pub fn neg(&self) -> QMatrix {
        QMatrix {
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    /// Basis of `{x : self x = 0}` read off the reduced row echelon form.
    pub fn nullspace(&self) -> Vec<QVec> {
        nullspace_of(self)
    }

    /// Canonical basis of the row space (nonzero rows of the RREF).
    pub fn row_space(&self) -> Vec<QVec> {
        let r = rref(self);
        r.matrix.rows.into_iter().take(r.pivots.len()).collect()
    }

    /// Some solution of `self x = b`, if one exists.
    pub fn solve(&self, b: &[Q]) -> Option<QVec> {
        assert_eq!(b.len(), self.nrows());
        let aug = self.hstack(&QMatrix::from_columns(self.nrows(), &[b.to_vec()]));
        let r = rref(&aug);
        if r.pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = zeros(self.ncols);
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = r.matrix.rows[i][self.ncols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.nrows(), self.ncols, "inverse of non-square matrix");
        let n = self.ncols;
        if n == 0 {
            return Some(QMatrix::zeros(0, 0));
        }
        let aug = self.hstack(&QMatrix::identity(n));
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.matrix.column_block(n, 2 * n))
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.nrows(), self.ncols, |i, j| {
            crate::rational::to_f64(&self.rows[i][j])
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &QMatrix) -> Rref {
    let mut a = m.rows.clone();
    let ncols = m.ncols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *x -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: QMatrix { ncols, rows: a }, pivots }
}

fn nullspace_of(m: &QMatrix) -> Vec<QVec> {
    let n = m.ncols;
    let r = rref(m);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for (i, &p) in r.pivots.iter().enumerate() {
            v[p] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut x = zeros(n);
        x[free] = Q::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            x[p] = -r.matrix.rows[i][free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Orthogonal projection of `v` onto the span of `basis` (exact).
pub fn project_onto_span(basis: &[QVec], v: &[Q]) -> QVec {
    if basis.is_empty() {
        return zeros(v.len());
    }
    let k = basis.len();
    let gram = QMatrix::from_rows(
        k,
        basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect(),
    );
    let rhs: QVec = basis.iter().map(|a| dot(a, v)).collect();
    let coef = gram.solve(&rhs).expect("independent basis");
    let mut out = zeros(v.len());
    for (c, b) in coef.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(vectors: &[QVec], v: &[Q]) -> bool {
    if crate::rational::is_zero_vec(v) {
        return true;
    }
    if vectors.is_empty() {
        return false;
    }
    QMatrix::from_columns(v.len(), vectors).solve(v).is_some()
}
