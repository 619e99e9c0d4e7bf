//! Tangent, normal and critical cones of `D = {z : A z ≤ b}`, and the face
//! data of the critical cone that describes the derivatives of `N_D`.

use num_traits::Zero;

use super::faces::{enumerate_faces, split_rows, Face};
use super::{PolyhedralCone, PolyhedralSet};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lp::LinearProgram;
use crate::rational::{format_vec, Q};
use crate::subspace::ExactSubspace;

/// Rows of `D` active at `d`, ascending. These are, in order, the inequality
/// rows of the tangent and critical cones, so face active sets can be mapped
/// back to rows of `D` through this list.
pub fn active_rows(d_set: &PolyhedralSet, d: &[Q]) -> Vec<usize> {
    d_set.active(d)
}

fn check_member(d_set: &PolyhedralSet, d: &[Q]) -> Result<()> {
    if d.len() != d_set.dim() {
        return Err(Error::Dimension(format!("point of length {} for a set in R^{}", d.len(), d_set.dim())));
    }
    if !d_set.contains(d) {
        return Err(Error::NotInSet(format!("{:?}", format_vec(d))));
    }
    Ok(())
}

/// `T_D(d) = {z : A_i z ≤ 0, i active at d}`.
pub fn tangent_cone(d_set: &PolyhedralSet, d: &[Q]) -> Result<PolyhedralCone> {
    check_member(d_set, d)?;
    let rows = active_rows(d_set, d);
    PolyhedralCone::new(d_set.a().select_rows(&rows), QMatrix::empty(d_set.dim()))
}

/// `N_D(d)`, the polar of the tangent cone.
pub fn normal_cone(d_set: &PolyhedralSet, d: &[Q]) -> Result<PolyhedralCone> {
    Ok(tangent_cone(d_set, d)?.polar())
}

/// `dstar ∈ N_D(d)`, i.e. `dstar = Σ λ_i a_i` over active rows with `λ ≥ 0`.
pub fn in_normal_cone(d_set: &PolyhedralSet, d: &[Q], dstar: &[Q]) -> Result<bool> {
    check_member(d_set, d)?;
    if dstar.len() != d_set.dim() {
        return Err(Error::Dimension("normal vector length".into()));
    }
    let rows = active_rows(d_set, d);
    if rows.is_empty() {
        return Ok(dstar.iter().all(Zero::is_zero));
    }
    let gens = d_set.a().select_rows(&rows);
    let mut lp = LinearProgram::<Q>::new(rows.len());
    for i in 0..rows.len() {
        lp.set_nonnegative(i);
    }
    for (j, target) in dstar.iter().enumerate() {
        lp.eq(gens.column(j), target.clone());
    }
    Ok(lp.solve().point().is_some())
}

fn check_graph(d_set: &PolyhedralSet, d: &[Q], dstar: &[Q]) -> Result<()> {
    if !in_normal_cone(d_set, d, dstar)? {
        return Err(Error::NotInGraph(format!("{:?} is not normal at {:?}", format_vec(dstar), format_vec(d))));
    }
    Ok(())
}

/// `K_D(d, d*) = T_D(d) ∩ [d*]⊥`.
pub fn critical_cone(d_set: &PolyhedralSet, d: &[Q], dstar: &[Q]) -> Result<PolyhedralCone> {
    check_graph(d_set, d, dstar)?;
    let t = tangent_cone(d_set, d)?;
    if dstar.iter().all(Zero::is_zero) {
        return Ok(t);
    }
    Ok(t.with_equalities(&QMatrix::from_rows(dstar.len(), vec![dstar.to_vec()])))
}

/// The subspaces `(F − F) × (F − F)⊥` over the faces `F` of the critical
/// cone, split `(k, k)`, each paired with its face.
pub fn sc_derivative_nd(d_set: &PolyhedralSet, d: &[Q], dstar: &[Q]) -> Result<Vec<(Face, ExactSubspace)>> {
    let k_cone = critical_cone(d_set, d, dstar)?;
    Ok(enumerate_faces(&k_cone)
        .into_iter()
        .map(|f| {
            let l = ExactSubspace::product(&f.lineality, &f.lineality.complement());
            (f, l)
        })
        .collect())
}

/// Nested faces `inner ⊆ outer` of a cone and the difference cone
/// `outer − inner`.
#[derive(Clone, Debug)]
pub struct FacePair {
    pub outer: Face,
    pub inner: Face,
    pub cone: PolyhedralCone,
}

impl FacePair {
    pub fn new(parent: &PolyhedralCone, outer: &Face, inner: &Face) -> Self {
        debug_assert!(outer.contains_face(inner));
        FacePair { outer: outer.clone(), inner: inner.clone(), cone: face_difference(parent, outer, inner) }
    }

    pub fn is_diagonal(&self) -> bool {
        self.outer.active == self.inner.active
    }
}

/// `F1 − F2 = {z : E z = 0, A_{J1} z = 0, A_{J2∖J1} z ≤ 0}` for faces with
/// active sets `J1 ⊆ J2`: differences of points of `F1` and `F2` satisfy
/// these rows, and conversely `z = (z + t w) − t w` for a relative interior
/// point `w` of `F2` and large `t`.
pub fn face_difference(parent: &PolyhedralCone, outer: &Face, inner: &Face) -> PolyhedralCone {
    let (tight, _) = split_rows(parent.ineq(), &outer.active);
    let extra: Vec<usize> = inner.active.iter().copied().filter(|i| !outer.active.contains(i)).collect();
    PolyhedralCone::new(parent.ineq().select_rows(&extra), parent.eq().vstack(&tight)).expect("consistent widths")
}

/// All nested pairs of faces of the critical cone: the pieces
/// `gph N_{F1 − F2}` of the outer limiting tangent cone to `gph N_D`.
pub fn outer_tangent_pieces(d_set: &PolyhedralSet, d: &[Q], dstar: &[Q]) -> Result<Vec<FacePair>> {
    let k_cone = critical_cone(d_set, d, dstar)?;
    Ok(face_pairs(&k_cone))
}

pub fn face_pairs(c: &PolyhedralCone) -> Vec<FacePair> {
    let faces = enumerate_faces(c);
    let mut out = Vec::new();
    for f1 in &faces {
        for f2 in &faces {
            if f1.contains_face(f2) {
                out.push(FacePair::new(c, f1, f2));
            }
        }
    }
    out
}

/// `(z, z*) ∈ gph N_C`: `z ∈ C`, `z* ∈ C°` and `⟨z, z*⟩ = 0`.
pub fn in_normal_graph(c: &PolyhedralCone, z: &[Q], zstar: &[Q]) -> bool {
    c.contains(z) && c.polar().contains(zstar) && crate::rational::dot(z, zstar).is_zero()
}

/// Maps a face's active set (indices into the critical cone's rows) back to
/// row indices of `D`.
pub fn rows_of_d(active: &[usize], rows: &[usize]) -> Vec<usize> {
    active.iter().map(|&i| rows[i]).collect()
}
