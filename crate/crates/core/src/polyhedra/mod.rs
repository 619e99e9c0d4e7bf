//! Exact polyhedral geometry in H-representation.
//!
//! Sets are `{z : A z ≤ b}`; cones are `{z : A z ≤ 0, E z = 0}`. Everything
//! here runs on rationals: face identity and cone triviality are discrete
//! questions and do not survive rounding.

mod dd;
mod faces;
mod normal;

pub use dd::Generators;
pub use faces::{cone_closure, enumerate_faces, enumerate_set_faces, implied_equalities, Face};
pub use normal::{
    active_rows, critical_cone, face_difference, face_pairs, in_normal_cone, in_normal_graph, normal_cone,
    outer_tangent_pieces, rows_of_d, sc_derivative_nd, tangent_cone, FacePair,
};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{dot, format_vec, neg_vec, q_from_json, zeros, Q, QVec};
use crate::subspace::ExactSubspace;

/// `{z ∈ R^k : A z ≤ b}`. Redundant rows are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralSet {
    a: QMatrix,
    b: QVec,
}

impl PolyhedralSet {
    pub fn new(a: QMatrix, b: QVec) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::Dimension(format!("A has {} rows but b has {} entries", a.nrows(), b.len())));
        }
        Ok(Self { a, b })
    }

    /// The whole space `R^k`.
    pub fn whole(k: usize) -> Self {
        Self { a: QMatrix::empty(k), b: Vec::new() }
    }

    /// The nonnegative orthant, written as `−z ≤ 0`.
    pub fn orthant(k: usize) -> Self {
        Self { a: QMatrix::identity(k).neg(), b: zeros(k) }
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn a(&self) -> &QMatrix {
        &self.a
    }

    pub fn b(&self) -> &QVec {
        &self.b
    }

    pub fn num_rows(&self) -> usize {
        self.b.len()
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        z.len() == self.dim() && self.a.rows().iter().zip(&self.b).all(|(r, bi)| dot(r, z) <= *bi)
    }

    /// Row indices with `A_i z = b_i`.
    pub fn active(&self, z: &[Q]) -> Vec<usize> {
        self.a
            .rows()
            .iter()
            .zip(&self.b)
            .enumerate()
            .filter(|(_, (r, bi))| dot(r, z) == **bi)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn feasible_point(&self) -> Option<QVec> {
        let mut lp = LinearProgram::<Q>::new(self.dim());
        for (r, bi) in self.a.rows().iter().zip(&self.b) {
            lp.le(r.clone(), bi.clone());
        }
        lp.solve().point().map(<[Q]>::to_vec)
    }

    pub fn is_empty(&self) -> bool {
        self.feasible_point().is_none()
    }

    /// Set with additional rows appended.
    pub fn with_rows(&self, a: &QMatrix, b: &[Q]) -> PolyhedralSet {
        PolyhedralSet { a: self.a.vstack(a), b: self.b.iter().chain(b).cloned().collect() }
    }

    pub fn from_json(value: &Value, dim: Option<usize>) -> Result<Self> {
        let a = matrix_from_json(value.get("A").ok_or_else(|| Error::Parse("missing field `A`".into()))?, dim)?;
        let b = vector_from_json(value.get("b").ok_or_else(|| Error::Parse("missing field `b`".into()))?)?;
        Self::new(a, b)
    }

    pub fn to_json(&self) -> Value {
        json!({ "A": matrix_to_json(&self.a), "b": format_vec(&self.b) })
    }
}

/// `{z ∈ R^k : A_ineq z ≤ 0, A_eq z = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyhedralCone {
    ineq: QMatrix,
    eq: QMatrix,
}

/// Outcome of a triviality test: `None` means the cone is `{0}`.
pub type NonzeroWitness = Option<QVec>;

impl PolyhedralCone {
    pub fn new(ineq: QMatrix, eq: QMatrix) -> Result<Self> {
        if ineq.ncols() != eq.ncols() {
            return Err(Error::Dimension(format!(
                "inequality rows have {} columns, equality rows {}",
                ineq.ncols(),
                eq.ncols()
            )));
        }
        Ok(Self { ineq, eq })
    }

    pub fn whole(k: usize) -> Self {
        Self { ineq: QMatrix::empty(k), eq: QMatrix::empty(k) }
    }

    pub fn zero(k: usize) -> Self {
        Self { ineq: QMatrix::empty(k), eq: QMatrix::identity(k) }
    }

    pub fn orthant(k: usize) -> Self {
        Self { ineq: QMatrix::identity(k).neg(), eq: QMatrix::empty(k) }
    }

    /// The subspace `L` viewed as a cone.
    pub fn from_subspace(l: &ExactSubspace) -> Self {
        Self { ineq: QMatrix::empty(l.ambient()), eq: l.constraint_matrix() }
    }

    pub fn dim(&self) -> usize {
        self.ineq.ncols()
    }

    pub fn ineq(&self) -> &QMatrix {
        &self.ineq
    }

    pub fn eq(&self) -> &QMatrix {
        &self.eq
    }

    pub fn contains(&self, z: &[Q]) -> bool {
        z.len() == self.dim()
            && self.ineq.rows().iter().all(|r| !dot(r, z).is_positive())
            && self.eq.rows().iter().all(|r| dot(r, z).is_zero())
    }

    /// Largest subspace inside the cone.
    pub fn lineality(&self) -> ExactSubspace {
        ExactSubspace::kernel((self.dim(), 0), &self.ineq.vstack(&self.eq))
    }

    /// Linear span of the cone, `C − C`.
    pub fn span(&self) -> ExactSubspace {
        let g = self.generators();
        let mut vecs = g.lineality.clone();
        vecs.extend(g.rays.iter().cloned());
        ExactSubspace::span((self.dim(), 0), &vecs)
    }

    pub fn generators(&self) -> Generators {
        dd::generators(self)
    }

    /// `C° = {y : ⟨y, z⟩ ≤ 0 for all z ∈ C}`.
    pub fn polar(&self) -> PolyhedralCone {
        let g = self.generators();
        let k = self.dim();
        PolyhedralCone { ineq: QMatrix::from_rows(k, g.rays), eq: QMatrix::from_rows(k, g.lineality) }
    }

    /// `{y : M y ∈ self}`.
    pub fn preimage(&self, m: &QMatrix) -> PolyhedralCone {
        PolyhedralCone { ineq: self.ineq.mul(m), eq: self.eq.mul(m) }
    }

    pub fn intersect(&self, other: &PolyhedralCone) -> PolyhedralCone {
        PolyhedralCone { ineq: self.ineq.vstack(&other.ineq), eq: self.eq.vstack(&other.eq) }
    }

    pub fn with_equalities(&self, rows: &QMatrix) -> PolyhedralCone {
        PolyhedralCone { ineq: self.ineq.clone(), eq: self.eq.vstack(rows) }
    }

    pub fn with_inequalities(&self, rows: &QMatrix) -> PolyhedralCone {
        PolyhedralCone { ineq: self.ineq.vstack(rows), eq: self.eq.clone() }
    }

    /// `C = {0}` exactly when this returns `None`; otherwise a nonzero
    /// rational point of `C`.
    pub fn nonzero_element(&self) -> NonzeroWitness {
        cone_nonzero_element(self)
    }

    pub fn is_trivial(&self) -> bool {
        self.nonzero_element().is_none()
    }

    /// A point `z ∈ C` with `M z ≠ 0`, if any.
    pub fn element_outside_kernel(&self, m: &QMatrix) -> NonzeroWitness {
        assert_eq!(m.ncols(), self.dim());
        for row in m.rows() {
            for sign in [Q::one(), -Q::one()] {
                let mut lp = LinearProgram::<Q>::new(self.dim());
                self.add_to_lp(&mut lp);
                lp.ge(row.iter().map(|x| x * &sign).collect(), Q::one());
                if let LpOutcome::Optimal { x, .. } = lp.solve() {
                    return Some(x);
                }
            }
        }
        None
    }

    fn add_to_lp(&self, lp: &mut LinearProgram<Q>) {
        for r in self.ineq.rows() {
            lp.le(r.clone(), Q::zero());
        }
        for r in self.eq.rows() {
            lp.eq(r.clone(), Q::zero());
        }
    }

    /// Set inclusion `other ⊆ self`, decided on generators of `other`.
    pub fn contains_cone(&self, other: &PolyhedralCone) -> bool {
        let g = other.generators();
        g.rays.iter().all(|r| self.contains(r))
            && g.lineality.iter().all(|l| self.contains(l) && self.contains(&neg_vec(l)))
    }

    pub fn set_eq(&self, other: &PolyhedralCone) -> bool {
        self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn from_json(value: &Value, dim: Option<usize>) -> Result<Self> {
        let ineq = match value.get("A_ineq") {
            Some(v) => matrix_from_json(v, dim)?,
            None => QMatrix::empty(dim.ok_or_else(|| Error::Parse("cone dimension unknown".into()))?),
        };
        let eq = match value.get("A_eq") {
            Some(v) => matrix_from_json(v, Some(ineq.ncols()))?,
            None => QMatrix::empty(ineq.ncols()),
        };
        Self::new(ineq, eq)
    }

    pub fn to_json(&self) -> Value {
        json!({ "A_ineq": matrix_to_json(&self.ineq), "A_eq": matrix_to_json(&self.eq) })
    }
}

/// Free function form of [`PolyhedralCone::nonzero_element`].
pub fn cone_is_trivial(c: &PolyhedralCone) -> (bool, NonzeroWitness) {
    let w = c.nonzero_element();
    (w.is_none(), w)
}

fn cone_nonzero_element(c: &PolyhedralCone) -> NonzeroWitness {
    if let Some(l) = c.lineality().witness() {
        return Some(l.clone());
    }
    // Pointed cone: any nonzero element has A z ≠ 0 with A z ≤ 0, so it can
    // be scaled to −1ᵀA z ≥ 1.
    if c.ineq.nrows() == 0 {
        return None;
    }
    let mut lp = LinearProgram::<Q>::new(c.dim());
    c.add_to_lp(&mut lp);
    let mut sum = zeros(c.dim());
    for r in c.ineq.rows() {
        for (s, x) in sum.iter_mut().zip(r) {
            *s -= x;
        }
    }
    lp.ge(sum, Q::one());
    lp.solve().point().map(<[Q]>::to_vec)
}

pub fn matrix_from_json(value: &Value, ncols: Option<usize>) -> Result<QMatrix> {
    let rows = value.as_array().ok_or_else(|| Error::Parse("expected a matrix (array of rows)".into()))?;
    let mut out: Vec<QVec> = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let row = vector_from_json(r).map_err(|e| Error::Parse(format!("row {i}: {e}")))?;
        out.push(row);
    }
    let width = match (out.first(), ncols) {
        (Some(r), Some(n)) if r.len() != n => {
            return Err(Error::Dimension(format!("expected {n} columns, found {}", r.len())))
        }
        (Some(r), _) => r.len(),
        (None, Some(n)) => n,
        (None, None) => 0,
    };
    if let Some((i, r)) = out.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(Error::Dimension(format!("row {i} has {} entries, expected {width}", r.len())));
    }
    Ok(QMatrix::from_rows(width, out))
}

pub fn vector_from_json(value: &Value) -> Result<QVec> {
    let arr = value.as_array().ok_or_else(|| Error::Parse("expected an array of numbers".into()))?;
    arr.iter().map(q_from_json).collect()
}

pub fn matrix_to_json(m: &QMatrix) -> Value {
    Value::Array(m.rows().iter().map(|r| json!(format_vec(r))).collect())
}
