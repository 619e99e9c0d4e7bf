//! Linear subspaces of `R^(n+m)` carrying an `(n, m)` split.
//!
//! [`Subspace`] is the floating-point value type (orthonormal basis, metric,
//! adjoint); [`ExactSubspace`] is its rational twin with a canonical reduced
//! row echelon basis, used wherever a verdict depends on the answer.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::rational::{is_zero_vec, neg_vec, zeros, Q, QVec};

/// Rank threshold, relative to the largest column norm.
pub const RANK_TOL: f64 = 1e-10;
/// Off-diagonal mass at which the Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 1e-12;
/// Default distance below which two float subspaces are considered equal.
pub const EQUALITY_TOL: f64 = 1e-8;

/// Subspace of `R^(n+m)` stored by an orthonormal basis (the columns of
/// `basis`). Zero-dimensional subspaces have an `ambient × 0` basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    split: (usize, usize),
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn zero(split: (usize, usize)) -> Self {
        Self { split, basis: DMatrix::zeros(split.0 + split.1, 0) }
    }

    pub fn full(split: (usize, usize)) -> Self {
        let n = split.0 + split.1;
        Self { split, basis: DMatrix::identity(n, n) }
    }

    /// Orthonormalized span of `columns`.
    pub fn from_spanning_matrix(columns: &[Vec<f64>], split: (usize, usize)) -> Result<Self> {
        let ambient = split.0 + split.1;
        if let Some(c) = columns.iter().find(|c| c.len() != ambient) {
            return Err(Error::Dimension(format!(
                "column of length {} in ambient dimension {ambient}",
                c.len()
            )));
        }
        let cols: Vec<DVector<f64>> = columns.iter().map(|c| DVector::from_column_slice(c)).collect();
        let max_norm = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max_norm == 0.0 {
            return Err(Error::ZeroSubspace);
        }
        Ok(Self::from_vectors(cols, split, RANK_TOL * max_norm))
    }

    /// Like [`Subspace::from_spanning_matrix`] but returns the zero subspace
    /// for an empty or all-zero input.
    pub fn span(columns: &[Vec<f64>], split: (usize, usize)) -> Result<Self> {
        match Self::from_spanning_matrix(columns, split) {
            Err(Error::ZeroSubspace) => Ok(Self::zero(split)),
            other => other,
        }
    }

    fn from_vectors(cols: Vec<DVector<f64>>, split: (usize, usize), tol: f64) -> Self {
        let ambient = split.0 + split.1;
        let q = gram_schmidt(cols, tol);
        let mut basis = DMatrix::zeros(ambient, q.len());
        for (j, v) in q.iter().enumerate() {
            basis.set_column(j, v);
        }
        Self { split, basis }
    }

    pub fn ambient(&self) -> usize {
        self.split.0 + self.split.1
    }

    pub fn split(&self) -> (usize, usize) {
        self.split
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Orthonormal basis as matrix columns.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<f64>> {
        self.basis.column_iter().map(|c| c.iter().copied().collect()).collect()
    }

    pub fn projection(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// `‖P₁ − P₂‖` in the spectral norm.
    pub fn distance(&self, other: &Subspace) -> Result<f64> {
        if self.ambient() != other.ambient() {
            return Err(Error::Dimension(format!(
                "ambient dimensions {} and {} differ",
                self.ambient(),
                other.ambient()
            )));
        }
        let diff = self.projection() - other.projection();
        Ok(spectral_norm_symmetric(&diff))
    }

    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.distance(other).is_ok_and(|d| d <= tol)
    }

    pub fn complement(&self) -> Subspace {
        let n = self.ambient();
        let mut q: Vec<DVector<f64>> = self.basis.column_iter().map(|c| c.into_owned()).collect();
        let d = q.len();
        for i in 0..n {
            if q.len() == n {
                break;
            }
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            for _ in 0..2 {
                for b in &q {
                    let c = b.dot(&v);
                    v.axpy(-c, b, 1.0);
                }
            }
            let norm = v.norm();
            if norm > 1e-6 {
                q.push(v / norm);
            }
        }
        let mut basis = DMatrix::zeros(n, q.len() - d);
        for (j, v) in q[d..].iter().enumerate() {
            basis.set_column(j, v);
        }
        Subspace { split: self.split, basis }
    }

    /// `L* = S_nm L⊥` with `S_nm(u, v) = (−v, u)`; the result has split `(m, n)`.
    pub fn adjoint(&self) -> Result<Subspace> {
        let (n, m) = self.split;
        if self.dim() != n {
            return Err(Error::Dimension(format!(
                "adjoint needs a subspace of dimension {n}, found {}",
                self.dim()
            )));
        }
        let comp = self.complement();
        let mut basis = DMatrix::zeros(n + m, comp.dim());
        for (j, c) in comp.basis.column_iter().enumerate() {
            for i in 0..m {
                basis[(i, j)] = -c[n + i];
            }
            for i in 0..n {
                basis[(m + i, j)] = c[i];
            }
        }
        Ok(Subspace { split: (m, n), basis })
    }

    /// `A·L` for a matrix of full column rank. Square matrices keep the split;
    /// otherwise `split` must describe the new ambient space.
    pub fn linear_image(&self, a: &DMatrix<f64>, split: Option<(usize, usize)>) -> Result<Subspace> {
        if a.ncols() != self.ambient() {
            return Err(Error::Dimension(format!(
                "matrix has {} columns, subspace lives in dimension {}",
                a.ncols(),
                self.ambient()
            )));
        }
        let out_split = match split {
            Some(s) if s.0 + s.1 == a.nrows() => s,
            Some(s) => {
                return Err(Error::Dimension(format!(
                    "split ({}, {}) does not match {} rows",
                    s.0,
                    s.1,
                    a.nrows()
                )))
            }
            None if a.nrows() == a.ncols() => self.split,
            None => return Err(Error::Dimension("non-square image needs a split".into())),
        };
        if numerical_rank(a) < a.ncols() {
            return Err(Error::RankDeficient);
        }
        let img = a * &self.basis;
        let cols: Vec<DVector<f64>> = img.column_iter().map(|c| c.into_owned()).collect();
        let max_norm = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok(Self::from_vectors(cols, out_split, RANK_TOL * max_norm.max(f64::MIN_POSITIVE)))
    }

    /// `L ∩ {z : z_i = 0 for every i with zeroed[i]}`.
    pub fn intersect_coordinate(&self, zeroed: &[bool]) -> Result<Subspace> {
        if zeroed.len() != self.ambient() {
            return Err(Error::Dimension(format!(
                "mask of length {} in ambient dimension {}",
                zeroed.len(),
                self.ambient()
            )));
        }
        let d = self.dim();
        // Coefficient vectors c with (basis·c)_i = 0 on masked rows.
        let rows: Vec<DVector<f64>> = zeroed
            .iter()
            .enumerate()
            .filter(|(_, &z)| z)
            .map(|(i, _)| self.basis.row(i).transpose())
            .collect();
        let row_space = gram_schmidt(rows, RANK_TOL);
        let coeff_space = Subspace::from_vectors(
            row_space,
            (d, 0),
            RANK_TOL,
        )
        .complement();
        let img = &self.basis * coeff_space.basis();
        let cols: Vec<DVector<f64>> = img.column_iter().map(|c| c.into_owned()).collect();
        Ok(Self::from_vectors(cols, self.split, RANK_TOL))
    }

    /// Distance from `v` to the subspace, relative to `‖v‖`.
    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        let v = DVector::from_column_slice(v);
        let norm = v.norm();
        if norm == 0.0 {
            return true;
        }
        let proj = &self.basis * (self.basis.transpose() * &v);
        (v - proj).norm() <= tol * norm
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.split == other.split && self.approx_eq(other, EQUALITY_TOL)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    ambient: usize,
    split: [usize; 2],
    basis: Vec<Vec<f64>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            ambient: self.ambient(),
            split: [self.split.0, self.split.1],
            basis: self.basis_vectors(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = SubspaceJson::deserialize(d)?;
        let split = (raw.split[0], raw.split[1]);
        if split.0 + split.1 != raw.ambient {
            return Err(D::Error::custom("split does not add up to ambient"));
        }
        if raw.basis.is_empty() {
            return Ok(Subspace::zero(split));
        }
        Subspace::from_spanning_matrix(&raw.basis, split).map_err(D::Error::custom)
    }
}

/// Twice-is-enough Gram-Schmidt with column pivoting: repeatedly takes the
/// residual of largest norm, stops once it drops to `tol`.
fn gram_schmidt(mut residuals: Vec<DVector<f64>>, tol: f64) -> Vec<DVector<f64>> {
    let mut q: Vec<DVector<f64>> = Vec::new();
    loop {
        let best = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let Some((idx, norm)) = best else { break };
        if norm <= tol || norm == 0.0 {
            break;
        }
        let mut v = residuals.swap_remove(idx) / norm;
        for b in &q {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
        let n2 = v.norm();
        if n2 == 0.0 {
            break;
        }
        v /= n2;
        for r in residuals.iter_mut() {
            let c = v.dot(r);
            r.axpy(-c, &v, 1.0);
        }
        q.push(v);
    }
    q
}

pub fn numerical_rank(a: &DMatrix<f64>) -> usize {
    let cols: Vec<DVector<f64>> = a.column_iter().map(|c| c.into_owned()).collect();
    let max_norm = cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return 0;
    }
    gram_schmidt(cols, RANK_TOL * max_norm).len()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, unsorted.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix expected");
    let mut a = m.clone();
    let scale = a.norm().max(1.0);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

pub fn spectral_norm_symmetric(m: &DMatrix<f64>) -> f64 {
    symmetric_eigenvalues(m).into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// Subspace over the rationals with its canonical (RREF) basis, so that
/// structural equality is set equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactSubspace {
    split: (usize, usize),
    basis: Vec<QVec>,
}

impl ExactSubspace {
    pub fn span(split: (usize, usize), vectors: &[QVec]) -> Self {
        let ambient = split.0 + split.1;
        assert!(vectors.iter().all(|v| v.len() == ambient), "vector length");
        let basis = QMatrix::from_rows(ambient, vectors.to_vec()).row_space();
        Self { split, basis }
    }

    pub fn zero(split: (usize, usize)) -> Self {
        Self { split, basis: Vec::new() }
    }

    pub fn full(split: (usize, usize)) -> Self {
        let n = split.0 + split.1;
        Self { split, basis: QMatrix::identity(n).into_rows() }
    }

    /// `{z : m z = 0}`.
    pub fn kernel(split: (usize, usize), m: &QMatrix) -> Self {
        assert_eq!(m.ncols(), split.0 + split.1);
        Self::span(split, &m.nullspace())
    }

    pub fn split(&self) -> (usize, usize) {
        self.split
    }

    pub fn ambient(&self) -> usize {
        self.split.0 + self.split.1
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVec] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        crate::linalg::in_span(&self.basis, v)
    }

    pub fn contains_subspace(&self, other: &ExactSubspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Rows spanning the orthogonal complement, i.e. `self = {z : C z = 0}`.
    pub fn constraint_matrix(&self) -> QMatrix {
        QMatrix::from_rows(self.ambient(), self.basis_matrix().nullspace())
    }

    fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_rows(self.ambient(), self.basis.clone())
    }

    pub fn complement(&self) -> ExactSubspace {
        Self::span(self.split, &self.basis_matrix().nullspace())
    }

    /// `S_nm L⊥` with split `(m, n)`.
    pub fn adjoint(&self) -> Result<ExactSubspace> {
        let (n, m) = self.split;
        if self.dim() != n {
            return Err(Error::Dimension(format!(
                "adjoint needs a subspace of dimension {n}, found {}",
                self.dim()
            )));
        }
        let rotated: Vec<QVec> = self
            .complement()
            .basis
            .iter()
            .map(|c| {
                let mut out = neg_vec(&c[n..]);
                out.extend_from_slice(&c[..n]);
                out
            })
            .collect();
        Ok(Self::span((m, n), &rotated))
    }

    /// `{M z : z ∈ self}` inside a space with the given split.
    pub fn image(&self, m: &QMatrix, split: (usize, usize)) -> ExactSubspace {
        assert_eq!(m.ncols(), self.ambient());
        assert_eq!(m.nrows(), split.0 + split.1);
        let vecs: Vec<QVec> = self.basis.iter().map(|b| m.mul_vec(b)).collect();
        Self::span(split, &vecs)
    }

    /// `{z : M z ∈ self}` for `z` in a space with the given split.
    pub fn preimage(&self, m: &QMatrix, split: (usize, usize)) -> ExactSubspace {
        assert_eq!(m.nrows(), self.ambient());
        assert_eq!(m.ncols(), split.0 + split.1);
        Self::kernel(split, &self.constraint_matrix().mul(m))
    }

    pub fn intersect(&self, other: &ExactSubspace) -> ExactSubspace {
        assert_eq!(self.ambient(), other.ambient());
        Self::kernel(self.split, &self.constraint_matrix().vstack(&other.constraint_matrix()))
    }

    /// `self ∩ {z : z_i = 0 for every i with zeroed[i]}`.
    pub fn intersect_coordinate(&self, zeroed: &[bool]) -> ExactSubspace {
        assert_eq!(zeroed.len(), self.ambient());
        let mut c = self.constraint_matrix();
        for (i, &z) in zeroed.iter().enumerate() {
            if z {
                c.push_row(crate::rational::unit(self.ambient(), i));
            }
        }
        Self::kernel(self.split, &c)
    }

    /// `A × B` inside `R^(a+b)`, split `(a.ambient, b.ambient)`.
    pub fn product(a: &ExactSubspace, b: &ExactSubspace) -> ExactSubspace {
        let (na, nb) = (a.ambient(), b.ambient());
        let mut vecs: Vec<QVec> = a
            .basis
            .iter()
            .map(|v| {
                let mut out = v.clone();
                out.extend(zeros(nb));
                out
            })
            .collect();
        vecs.extend(b.basis.iter().map(|v| {
            let mut out = zeros(na);
            out.extend_from_slice(v);
            out
        }));
        Self::span((na, nb), &vecs)
    }

    pub fn with_split(mut self, split: (usize, usize)) -> ExactSubspace {
        assert_eq!(split.0 + split.1, self.ambient());
        self.split = split;
        self
    }

    pub fn to_float(&self) -> Subspace {
        let cols: Vec<Vec<f64>> = self.basis.iter().map(|v| crate::rational::vec_to_f64(v)).collect();
        Subspace::span(&cols, self.split).expect("consistent dimensions")
    }

    /// A nonzero element, if any.
    pub fn witness(&self) -> Option<&QVec> {
        self.basis.iter().find(|v| !is_zero_vec(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn spanning_matrix_normalizes_and_drops_dependent_columns() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 2.0]], (1, 1)).unwrap();
        let b = s.basis_vectors();
        assert!(close(b[0][0].abs(), 1.0 / 5f64.sqrt()) && close(b[0][1].abs(), 2.0 / 5f64.sqrt()));

        let s = Subspace::from_spanning_matrix(&[vec![1.0, 0.0], vec![2.0, 0.0]], (1, 1)).unwrap();
        assert_eq!(s.dim(), 1);

        let err = Subspace::from_spanning_matrix(&[vec![0.0, 0.0]], (1, 1)).unwrap_err();
        assert_eq!(err.to_string(), "zero subspace requires explicit dimension 0");
    }

    #[test]
    fn projections() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 1.0]], (1, 1)).unwrap();
        let p = s.projection();
        for v in p.iter() {
            assert!(close(*v, 0.5));
        }
        assert_eq!(Subspace::zero((1, 1)).projection(), DMatrix::zeros(2, 2));
    }

    #[test]
    fn distances() {
        let e1 = Subspace::from_spanning_matrix(&[vec![1.0, 0.0]], (1, 1)).unwrap();
        let e2 = Subspace::from_spanning_matrix(&[vec![0.0, 1.0]], (1, 1)).unwrap();
        let diag = Subspace::from_spanning_matrix(&[vec![1.0, 1.0]], (1, 1)).unwrap();
        assert!(close(e1.distance(&e2).unwrap(), 1.0));
        assert!(close(e1.distance(&e1).unwrap(), 0.0));
        assert!((e1.distance(&diag).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let big = Subspace::full((2, 1));
        assert!(e1.distance(&big).is_err());
    }

    #[test]
    fn complements() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 2.0]], (1, 1)).unwrap();
        let c = s.complement();
        let expected = Subspace::from_spanning_matrix(&[vec![-2.0, 1.0]], (1, 1)).unwrap();
        assert!(c.distance(&expected).unwrap() < 1e-12);
        assert_eq!(Subspace::full((2, 1)).complement().dim(), 0);
    }

    #[test]
    fn adjoint_of_a_line() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 2.0]], (1, 1)).unwrap();
        assert!(s.adjoint().unwrap().distance(&s).unwrap() < 1e-12);
        let zero_map = Subspace::from_spanning_matrix(&[vec![1.0, 0.0]], (1, 1)).unwrap();
        assert!(zero_map.adjoint().unwrap().distance(&zero_map).unwrap() < 1e-12);
        assert!(Subspace::full((1, 1)).adjoint().is_err());
    }

    #[test]
    fn adjoint_of_graph_is_graph_of_transpose() {
        // rge(I, A) ↦ rge(I, Aᵀ)
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, -3.0, 0.5]);
        let graph = |m: &DMatrix<f64>| {
            let cols: Vec<Vec<f64>> = (0..2)
                .map(|j| {
                    let mut c = vec![0.0; 4];
                    c[j] = 1.0;
                    c[2] = m[(0, j)];
                    c[3] = m[(1, j)];
                    c
                })
                .collect();
            Subspace::from_spanning_matrix(&cols, (2, 2)).unwrap()
        };
        let adj = graph(&a).adjoint().unwrap();
        assert!(adj.distance(&graph(&a.transpose())).unwrap() < 1e-10);
    }

    #[test]
    fn linear_images() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 0.0]], (1, 1)).unwrap();
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let img = s.linear_image(&a, None).unwrap();
        let expected = Subspace::from_spanning_matrix(&[vec![1.0, 1.0]], (1, 1)).unwrap();
        assert!(img.distance(&expected).unwrap() < 1e-12);
        let two = DMatrix::identity(2, 2) * 2.0;
        assert!(s.linear_image(&two, None).unwrap().distance(&s).unwrap() < 1e-12);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(s.linear_image(&singular, None).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn coordinate_intersections() {
        let full = Subspace::full((1, 1));
        let r = full.intersect_coordinate(&[true, false]).unwrap();
        let e2 = Subspace::from_spanning_matrix(&[vec![0.0, 1.0]], (1, 1)).unwrap();
        assert!(r.distance(&e2).unwrap() < 1e-12);

        let diag = Subspace::from_spanning_matrix(&[vec![1.0, 1.0]], (1, 1)).unwrap();
        assert_eq!(diag.intersect_coordinate(&[true, false]).unwrap().dim(), 0);

        let s = Subspace::from_spanning_matrix(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]], (2, 1)).unwrap();
        let r = s.intersect_coordinate(&[false, false, true]).unwrap();
        let e1 = Subspace::from_spanning_matrix(&[vec![1.0, 0.0, 0.0]], (2, 1)).unwrap();
        assert!(r.distance(&e1).unwrap() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let s = Subspace::from_spanning_matrix(&[vec![1.0, 2.0]], (1, 1)).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.starts_with("{\"ambient\":2,\"split\":[1,1],\"basis\":"));
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert!(back.distance(&s).unwrap() < 1e-12);
        let zero: Subspace = serde_json::from_str("{\"ambient\":2,\"split\":[1,1],\"basis\":[]}").unwrap();
        assert_eq!(zero.dim(), 0);
    }

    #[test]
    fn jacobi_matches_closed_form_2x2() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let mut ev = symmetric_eigenvalues(&m);
        ev.sort_by(f64::total_cmp);
        assert!(close(ev[0], 1.0) && close(ev[1], 3.0));
    }

    #[test]
    fn exact_adjoint_and_intersection() {
        let l = ExactSubspace::span((1, 1), &[qvec(&[1, 2])]);
        assert_eq!(l.adjoint().unwrap(), l);
        let s = ExactSubspace::span((2, 1), &[qvec(&[1, 0, 0]), qvec(&[0, 1, 1])]);
        let r = s.intersect_coordinate(&[false, false, true]);
        assert_eq!(r, ExactSubspace::span((2, 1), &[qvec(&[3, 0, 0])]));
        assert_eq!(s.complement().dim(), 1);
        assert!(s.contains(&qvec(&[2, -1, -1])));
        assert!(!s.contains(&qvec(&[0, 1, 0])));
    }

    #[test]
    fn exact_preimage_and_image() {
        let target = ExactSubspace::span((1, 1), &[qvec(&[1, 1])]);
        let m = QMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        // {z : (z1, z1 + z2) ∈ span(1,1)} = {z2 = 0}
        let pre = target.preimage(&m, (1, 1));
        assert_eq!(pre, ExactSubspace::span((1, 1), &[qvec(&[1, 0])]));
        assert_eq!(pre.image(&m, (1, 1)), target);
    }
}
