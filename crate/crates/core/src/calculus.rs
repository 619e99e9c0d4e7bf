//! Subspace-containing derivatives of `Q(x, y) = N_D(g(x, y))`, of
//! `H = f + Q`, and of the extended map `F(x, y) = (x, H(x, y))`.
//!
//! Every collection is computed exactly. Members keep the face of the
//! critical cone they come from so failures can be traced back to it.

use nalgebra::DMatrix;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::polyhedra::{enumerate_faces, rows_of_d, PolyhedralSet};
use crate::problem::GeProblem;
use crate::rational::{format_vec, zeros, Q, QVec};
use crate::subspace::{ExactSubspace, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Primal,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub subspace: ExactSubspace,
    /// Rows of `D` forming the active set of the originating face.
    pub face: Vec<usize>,
}

/// Collection of subspaces of one kind, all with the same split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScdCollection {
    pub kind: Kind,
    /// Dimension of the parameter block; `l + k` when the problem had to be
    /// augmented.
    pub param_dim: usize,
    pub augmented: bool,
    pub members: Vec<Member>,
}

impl ScdCollection {
    pub fn split(&self) -> Option<(usize, usize)> {
        self.members.first().map(|m| m.subspace.split())
    }

    /// Member-wise adjoint.
    pub fn adjoint(&self) -> Result<ScdCollection> {
        let members = self
            .members
            .iter()
            .map(|m| Ok(Member { subspace: m.subspace.adjoint()?, face: m.face.clone() }))
            .collect::<Result<Vec<_>>>()?;
        let kind = match self.kind {
            Kind::Primal => Kind::Dual,
            Kind::Dual => Kind::Primal,
        };
        Ok(ScdCollection { kind, param_dim: self.param_dim, augmented: self.augmented, members })
    }

    pub fn to_float(&self) -> Vec<Subspace> {
        self.members.iter().map(|m| m.subspace.to_float()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let members: Vec<serde_json::Value> = self
            .members
            .iter()
            .map(|m| {
                let (n, mm) = m.subspace.split();
                serde_json::json!({
                    "face": m.face,
                    "ambient": n + mm,
                    "split": [n, mm],
                    "basis": m.subspace.basis().iter().map(|b| format_vec(b)).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "kind": self.kind,
            "param_dim": self.param_dim,
            "augmented": self.augmented,
            "members": members,
        })
    }
}

/// `[[A, 0], [0, B]]`.
fn block_diag(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let top = a.hstack(&QMatrix::zeros(a.nrows(), b.ncols()));
    let bottom = QMatrix::zeros(b.nrows(), a.ncols()).hstack(b);
    top.vstack(&bottom)
}

/// Members of the primal collection of `Q = N_D ∘ g`, one per face `F` of
/// the critical cone: `{((u, v), e*) : ∇g (u, v) ∈ F − F, e* ∈ (F − F)⊥}`.
///
/// When `∇g` lacks full row rank the collection is computed for the
/// augmented problem (parameter `(x, p)`, `g̃ = g − p`).
pub fn sc_derivative_q(p: &GeProblem) -> ScdCollection {
    let (q, augmented) = p.regularized();
    let n = q.l() + q.k();
    let k = q.k();
    let rows = q.critical_rows();
    let members = enumerate_faces(&q.critical_cone())
        .into_iter()
        .map(|f| {
            let normals = f.lineality.constraint_matrix();
            let span_t = QMatrix::from_rows(k, f.lineality.basis().to_vec());
            let kernel = block_diag(&normals.mul(q.jg()), &span_t);
            Member { subspace: ExactSubspace::kernel((n, k), &kernel), face: rows_of_d(&f.active, &rows) }
        })
        .collect();
    ScdCollection { kind: Kind::Primal, param_dim: q.l(), augmented, members }
}

/// Primal and dual collections of `H = f + Q`.
///
/// Primal members are images of the `Q` members under
/// `(z, e) ↦ (z, ∇f z + e)`; dual members are images of the adjoint `Q`
/// members under `(w*, z*) ↦ (w*, ∇fᵀ w* + z*)`.
pub fn sc_derivative_h(p: &GeProblem) -> Result<(ScdCollection, ScdCollection)> {
    let q_primal = sc_derivative_q(p);
    let q_dual = q_primal.adjoint()?;
    let (reg, _) = p.regularized();
    let jf = reg.jf();
    let n = reg.l() + reg.k();
    let k = reg.k();

    let primal_map = QMatrix::identity(n).hstack(&QMatrix::zeros(n, k)).vstack(&jf.hstack(&QMatrix::identity(k)));
    let dual_map =
        QMatrix::identity(k).hstack(&QMatrix::zeros(k, n)).vstack(&jf.transpose().hstack(&QMatrix::identity(n)));

    let map_members = |c: &ScdCollection, m: &QMatrix, split: (usize, usize)| -> Vec<Member> {
        c.members
            .iter()
            .map(|mem| Member { subspace: mem.subspace.image(m, split), face: mem.face.clone() })
            .collect()
    };
    let primal = ScdCollection { members: map_members(&q_primal, &primal_map, (n, k)), ..q_primal.clone() };
    let dual = ScdCollection { members: map_members(&q_dual, &dual_map, (k, n)), ..q_dual };
    Ok((primal, dual))
}

/// `S_nm(u, v) = (−v, u)` as a matrix from `R^(n+m)` to `R^(m+n)`.
pub fn rotation(n: usize, m: usize) -> QMatrix {
    let top = QMatrix::zeros(m, n).hstack(&QMatrix::identity(m).neg());
    let bottom = QMatrix::identity(n).hstack(&QMatrix::zeros(n, m));
    top.vstack(&bottom)
}

/// `L = ∇Φ⁻¹ M` for an invertible Jacobian of a map on `R^(n+m)`.
pub fn transform_primal(jphi: &QMatrix, m: &ExactSubspace) -> Result<ExactSubspace> {
    if jphi.nrows() != jphi.ncols() || jphi.ncols() != m.ambient() {
        return Err(Error::Dimension("Jacobian must be square and match the subspace".into()));
    }
    if jphi.inverse().is_none() {
        return Err(Error::Singular("transformation Jacobian is not invertible".into()));
    }
    Ok(m.preimage(jphi, m.split()))
}

/// `L* = S ∇Φᵀ Sᵀ M*`, where `M*` has split `(m, n)`.
pub fn transform_dual(jphi: &QMatrix, m_star: &ExactSubspace) -> Result<ExactSubspace> {
    let (m, n) = m_star.split();
    if jphi.nrows() != jphi.ncols() || jphi.ncols() != n + m {
        return Err(Error::Dimension("Jacobian must be square and match the subspace".into()));
    }
    if jphi.inverse().is_none() {
        return Err(Error::Singular("transformation Jacobian is not invertible".into()));
    }
    let s = rotation(n, m);
    let t = s.mul(&jphi.transpose()).mul(&s.transpose());
    Ok(m_star.image(&t, (m, n)))
}

/// Floating-point version of [`transform_primal`] on [`Subspace`] values.
pub fn transform_primal_f64(jphi: &DMatrix<f64>, m: &Subspace) -> Result<Subspace> {
    let inv = jphi
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("transformation Jacobian is not invertible".into()))?;
    m.linear_image(&inv, None)
}

/// Floating-point version of [`transform_dual`].
pub fn transform_dual_f64(jphi: &DMatrix<f64>, m_star: &Subspace) -> Result<Subspace> {
    let (m, n) = m_star.split();
    let s = rotation(n, m).to_f64();
    let t = &s * jphi.transpose() * s.transpose();
    m_star.linear_image(&t, None)
}

/// Collections of `F(x, y) = (x, H(x, y))`, split `(P + k, P + k)` with `P`
/// the parameter dimension: primal members `{((u, v), (u, w)) : ((u, v), w) ∈ L}`,
/// dual members `{((q*, w*), (q* + u*, v*)) : (w*, (u*, v*)) ∈ L*}`.
pub fn extend_to_f(primal: &ScdCollection, dual: &ScdCollection) -> (ScdCollection, ScdCollection) {
    let p = primal.param_dim;
    let (n, kk) = primal.split().unwrap_or((p, 0));
    debug_assert_eq!(n, p + kk);
    // (u, v, w) ↦ (u, v, u, w)
    let mut emb = QMatrix::zeros(2 * n, n + kk);
    for i in 0..n {
        emb.set(i, i, Q::one());
    }
    for i in 0..p {
        emb.set(n + i, i, Q::one());
    }
    for i in 0..kk {
        emb.set(n + p + i, n + i, Q::one());
    }
    // (w*, u*, v*) ↦ (0, w*, u*, v*)
    let mut emb_dual = QMatrix::zeros(2 * n, kk + n);
    for i in 0..(kk + n) {
        emb_dual.set(p + i, i, Q::one());
    }
    let extra: Vec<QVec> = (0..p)
        .map(|i| {
            let mut v = zeros(2 * n);
            v[i] = Q::one();
            v[n + i] = Q::one();
            v
        })
        .collect();

    let primal_members = primal
        .members
        .iter()
        .map(|m| Member { subspace: m.subspace.image(&emb, (n, n)), face: m.face.clone() })
        .collect();
    let dual_members = dual
        .members
        .iter()
        .map(|m| {
            let img = m.subspace.image(&emb_dual, (n, n));
            let mut vecs = img.basis().to_vec();
            vecs.extend(extra.iter().cloned());
            Member { subspace: ExactSubspace::span((n, n), &vecs), face: m.face.clone() }
        })
        .collect();
    (
        ScdCollection { members: primal_members, ..primal.clone() },
        ScdCollection { members: dual_members, ..dual.clone() },
    )
}

/// One affine branch `z ↦ A z + c` on a closed polyhedral cell.
#[derive(Clone, Debug)]
pub struct AffinePiece {
    pub matrix: QMatrix,
    pub offset: QVec,
    pub cell: PolyhedralSet,
}

impl AffinePiece {
    fn value(&self, x: &[Q]) -> QVec {
        crate::rational::add_vec(&self.matrix.mul_vec(x), &self.offset)
    }
}

/// B-Jacobian of a continuous piecewise-affine map at `x`: the matrices of
/// the full-dimensional cells containing `x`, without repetition.
///
/// Errors when the active cells fail to cover the directions `±e_i`,
/// `±e_i ± e_j` around `x`, or when two active branches disagree on the
/// common part of their tangent cones.
pub fn bjacobian_pwa(pieces: &[AffinePiece], x: &[Q]) -> Result<Vec<QMatrix>> {
    let n = x.len();
    let active: Vec<&AffinePiece> = pieces
        .iter()
        .filter(|p| p.cell.contains(x) && crate::polyhedra::enumerate_set_faces(&p.cell).first().is_some_and(|f| f.dim == n))
        .collect();
    if active.is_empty() {
        return Err(Error::NotCovered(format!("no cell contains {:?}", format_vec(x))));
    }
    let tangents: Vec<_> = active
        .iter()
        .map(|p| crate::polyhedra::tangent_cone(&p.cell, x).expect("x lies in the cell"))
        .collect();

    let mut probes: Vec<QVec> = Vec::new();
    let one = Q::one();
    for i in 0..n {
        for si in [one.clone(), -one.clone()] {
            let mut v = zeros(n);
            v[i] = si.clone();
            probes.push(v.clone());
            for j in (i + 1)..n {
                for sj in [one.clone(), -one.clone()] {
                    let mut w = v.clone();
                    w[j] = sj;
                    probes.push(w);
                }
            }
        }
    }
    if let Some(d) = probes.iter().find(|d| !tangents.iter().any(|t| t.contains(d))) {
        return Err(Error::NotCovered(format!("direction {:?} is not covered", format_vec(d))));
    }

    for (i, a) in active.iter().enumerate() {
        for (j, b) in active.iter().enumerate().skip(i + 1) {
            if a.value(x) != b.value(x) {
                return Err(Error::Discontinuous(format!("branches {i} and {j} differ at the point")));
            }
            let common = tangents[i].intersect(&tangents[j]).generators();
            let diff = QMatrix::from_rows(
                n,
                a.matrix.rows().iter().zip(b.matrix.rows()).map(|(r, s)| crate::rational::sub_vec(r, s)).collect(),
            );
            let bad = common.rays.iter().chain(&common.lineality).any(|g| !crate::rational::is_zero_vec(&diff.mul_vec(g)));
            if bad {
                return Err(Error::Discontinuous(format!("branches {i} and {j} differ on their common cone")));
            }
        }
    }

    let mut out: Vec<QMatrix> = Vec::new();
    for p in active {
        if !out.contains(&p.matrix) {
            out.push(p.matrix.clone());
        }
    }
    Ok(out)
}

/// `rge(I, A) = {(z, A z)}`, split `(n, m)` for `A` of size `m × n`.
pub fn graph_subspace(a: &QMatrix) -> ExactSubspace {
    let (m, n) = (a.nrows(), a.ncols());
    let basis: Vec<QVec> = (0..n)
        .map(|j| {
            let mut v = crate::rational::unit(n, j);
            v.extend(a.column(j));
            v
        })
        .collect();
    ExactSubspace::span((n, m), &basis)
}

/// Primal and dual SC lift of a B-Jacobian: `{rge(I, A)}` and `{rge(I, Aᵀ)}`.
pub fn sc_lift(jacobians: &[QMatrix]) -> (Vec<ExactSubspace>, Vec<ExactSubspace>) {
    (
        jacobians.iter().map(graph_subspace).collect(),
        jacobians.iter().map(|a| graph_subspace(&a.transpose())).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    fn two_branch() -> GeProblem {
        GeProblem::affine(
            1,
            1,
            qvec(&[0]),
            qvec(&[0]),
            QMatrix::from_i64(&[&[0, -1]]),
            QMatrix::from_i64(&[&[-1, 1]]),
            qvec(&[0]),
            qvec(&[0]),
            PolyhedralSet::orthant(1),
        )
        .unwrap()
    }

    #[test]
    fn q_members_of_the_two_branch_example() {
        let c = sc_derivative_q(&two_branch());
        assert!(!c.augmented);
        assert_eq!(c.members.len(), 2);
        // face R_+ : e* = 0 ; face {0} : v = u
        assert_eq!(c.members[0].subspace, ExactSubspace::kernel((2, 1), &QMatrix::from_i64(&[&[0, 0, 1]])));
        assert_eq!(c.members[1].subspace, ExactSubspace::kernel((2, 1), &QMatrix::from_i64(&[&[-1, 1, 0]])));
        assert_eq!(c.members[0].face, Vec::<usize>::new());
        assert_eq!(c.members[1].face, vec![0]);
    }

    #[test]
    fn h_members_and_duality() {
        let (primal, dual) = sc_derivative_h(&two_branch()).unwrap();
        // L1 = {((u, v), -v)}, L2 = {((u, u), t)}
        assert_eq!(primal.members[0].subspace, ExactSubspace::span((2, 1), &[qvec(&[1, 0, 0]), qvec(&[0, 1, -1])]));
        assert_eq!(primal.members[1].subspace, ExactSubspace::span((2, 1), &[qvec(&[1, 1, 0]), qvec(&[0, 0, 1])]));
        assert_eq!(primal.adjoint().unwrap().members, dual.members);
        for m in &dual.members {
            assert_eq!(m.subspace.dim(), 1);
        }
    }

    #[test]
    fn unconstrained_problem_gives_the_graph_of_jf() {
        let p = GeProblem::affine(
            1,
            1,
            qvec(&[0]),
            qvec(&[0]),
            QMatrix::from_i64(&[&[2, 3]]),
            QMatrix::from_i64(&[&[0, 1]]),
            qvec(&[0]),
            qvec(&[0]),
            PolyhedralSet::whole(1),
        )
        .unwrap();
        let (primal, _) = sc_derivative_h(&p).unwrap();
        assert_eq!(primal.members.len(), 1);
        assert_eq!(primal.members[0].subspace, graph_subspace(p.jf()));
    }

    #[test]
    fn rank_deficient_constraint_map_is_augmented() {
        let p = GeProblem::affine(
            1,
            1,
            qvec(&[0]),
            qvec(&[0]),
            QMatrix::from_i64(&[&[0, -1]]),
            QMatrix::from_i64(&[&[0, 0]]),
            qvec(&[0]),
            qvec(&[0]),
            PolyhedralSet::orthant(1),
        )
        .unwrap();
        let c = sc_derivative_q(&p);
        assert!(c.augmented);
        assert_eq!(c.param_dim, 2);
        let direct = sc_derivative_q(&p.augmented());
        assert_eq!(direct.members, c.members);
        for m in &c.members {
            assert_eq!(m.subspace.dim(), 3);
        }
    }

    #[test]
    fn transformations_commute_with_adjoints() {
        let jphi = QMatrix::from_i64(&[&[1, 0, 0], &[2, 1, 0], &[1, -1, 1]]);
        let m = ExactSubspace::span((2, 1), &[qvec(&[1, 0, 1]), qvec(&[0, 1, 2])]);
        let l = transform_primal(&jphi, &m).unwrap();
        let l_star = transform_dual(&jphi, &m.adjoint().unwrap()).unwrap();
        assert_eq!(l.adjoint().unwrap(), l_star);
        assert_eq!(transform_primal(&QMatrix::identity(3), &m).unwrap(), m);
        let singular = QMatrix::from_i64(&[&[1, 0, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(matches!(transform_primal(&singular, &m), Err(Error::Singular(_))));
    }

    #[test]
    fn extension_of_the_two_branch_example() {
        let (primal, dual) = sc_derivative_h(&two_branch()).unwrap();
        let (fp, fd) = extend_to_f(&primal, &dual);
        // L1 -> {((u, v), (u, -v))}
        assert_eq!(fp.members[0].subspace, ExactSubspace::span((2, 2), &[qvec(&[1, 0, 1, 0]), qvec(&[0, 1, 0, -1])]));
        for (p, d) in fp.members.iter().zip(&fd.members) {
            assert_eq!(p.subspace.adjoint().unwrap(), d.subspace);
        }
    }

    #[test]
    fn absolute_value_and_max() {
        let cell = |s: i64| PolyhedralSet::new(QMatrix::from_i64(&[&[-s]]), qvec(&[0])).unwrap();
        let abs = [
            AffinePiece { matrix: QMatrix::from_i64(&[&[1]]), offset: qvec(&[0]), cell: cell(1) },
            AffinePiece { matrix: QMatrix::from_i64(&[&[-1]]), offset: qvec(&[0]), cell: cell(-1) },
        ];
        let j = bjacobian_pwa(&abs, &qvec(&[0])).unwrap();
        assert_eq!(j, vec![QMatrix::from_i64(&[&[1]]), QMatrix::from_i64(&[&[-1]])]);
        let (lift, _) = sc_lift(&j);
        assert_eq!(lift[0], ExactSubspace::span((1, 1), &[qvec(&[1, 1])]));
        assert_eq!(lift[1], ExactSubspace::span((1, 1), &[qvec(&[1, -1])]));
        assert_eq!(bjacobian_pwa(&abs, &qvec(&[3])).unwrap(), vec![QMatrix::from_i64(&[&[1]])]);

        // max(z, 2z): slope 2 for z ≥ 0, 1 for z ≤ 0
        let mx = [
            AffinePiece { matrix: QMatrix::from_i64(&[&[1]]), offset: qvec(&[0]), cell: cell(-1) },
            AffinePiece { matrix: QMatrix::from_i64(&[&[2]]), offset: qvec(&[0]), cell: cell(1) },
        ];
        assert_eq!(bjacobian_pwa(&mx, &qvec(&[0])).unwrap().len(), 2);

        let half = [abs[0].clone()];
        assert!(matches!(bjacobian_pwa(&half, &qvec(&[0])), Err(Error::NotCovered(_))));
        let jump = [
            abs[0].clone(),
            AffinePiece { matrix: QMatrix::from_i64(&[&[-1]]), offset: qvec(&[1]), cell: cell(-1) },
        ];
        assert!(matches!(bjacobian_pwa(&jump, &qvec(&[0])), Err(Error::Discontinuous(_))));
    }
}
