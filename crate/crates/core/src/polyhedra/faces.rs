//! Face lattices by breadth-first search over closed active sets.
//!
//! A face is identified by the set of inequality rows tight on all of it.
//! Starting from the implied equalities of the whole polyhedron, each face is
//! refined by forcing one more row to equality and closing the result under
//! implied equalities with a single LP.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::{One, Zero};

use super::{PolyhedralCone, PolyhedralSet};
use crate::linalg::QMatrix;
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{zeros, Q, QVec};
use crate::subspace::ExactSubspace;

/// Nonempty face of a polyhedron, with `active` sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub active: Vec<usize>,
    pub dim: usize,
    /// `F − F`, the direction space of the affine hull.
    pub lineality: ExactSubspace,
}

impl Face {
    /// `other ⊆ self`.
    pub fn contains_face(&self, other: &Face) -> bool {
        let mine: BTreeSet<usize> = self.active.iter().copied().collect();
        mine.is_subset(&other.active.iter().copied().collect())
    }

    /// The face of a cone as a cone in its own right.
    pub fn as_cone(&self, parent: &PolyhedralCone) -> PolyhedralCone {
        let (tight, loose) = split_rows(parent.ineq(), &self.active);
        PolyhedralCone::new(loose, parent.eq().vstack(&tight)).expect("consistent widths")
    }
}

pub(super) fn split_rows(a: &QMatrix, active: &[usize]) -> (QMatrix, QMatrix) {
    let inactive: Vec<usize> = (0..a.nrows()).filter(|i| !active.contains(i)).collect();
    (a.select_rows(active), a.select_rows(&inactive))
}

/// `{z : A z ≤ b, E z = e}`
struct System {
    a: QMatrix,
    b: QVec,
    e: QMatrix,
    ev: QVec,
}

impl System {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    /// Rows tight on all of `{z ∈ system : A_i z = b_i, i ∈ forced}`, or
    /// `None` if that set is empty.
    ///
    /// Homogenized so one LP settles every row: maximize `Σ t_j` over
    /// `A_j z + t_j ≤ b_j s`, `0 ≤ t_j ≤ 1`, `s ≥ 1`. Scaling a relative
    /// interior point lets every non-implied row reach `t_j = 1`, while
    /// implied rows are stuck at 0.
    fn closure(&self, forced: &BTreeSet<usize>) -> Option<Vec<usize>> {
        let k = self.dim();
        let free_rows: Vec<usize> = (0..self.a.nrows()).filter(|i| !forced.contains(i)).collect();
        let nt = free_rows.len();
        let nvars = k + 1 + nt;
        let mut lp = LinearProgram::<Q>::new(nvars);
        for j in 0..=nt {
            lp.set_nonnegative(k + j);
        }
        let row_with = |coeffs: &[Q], rhs: &Q, t: Option<usize>| {
            let mut r = zeros(nvars);
            r[..k].clone_from_slice(coeffs);
            r[k] = -rhs.clone();
            if let Some(t) = t {
                r[k + 1 + t] = Q::one();
            }
            r
        };
        for &i in forced {
            lp.eq(row_with(self.a.row(i), &self.b[i], None), Q::zero());
        }
        for (t, &i) in free_rows.iter().enumerate() {
            lp.le(row_with(self.a.row(i), &self.b[i], Some(t)), Q::zero());
            let mut cap = zeros(nvars);
            cap[k + 1 + t] = Q::one();
            lp.le(cap, Q::one());
        }
        for (r, e) in self.e.rows().iter().zip(&self.ev) {
            lp.eq(row_with(r, e, None), Q::zero());
        }
        let mut s = zeros(nvars);
        s[k] = Q::one();
        lp.ge(s, Q::one());
        let mut obj = zeros(nvars);
        for t in 0..nt {
            obj[k + 1 + t] = Q::one();
        }
        lp.maximize(obj);
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => {
                let mut closed: Vec<usize> = forced.iter().copied().collect();
                closed.extend(free_rows.iter().enumerate().filter(|(t, _)| x[k + 1 + t].is_zero()).map(|(_, &i)| i));
                closed.sort_unstable();
                Some(closed)
            }
            _ => None,
        }
    }

    fn face(&self, active: Vec<usize>) -> Face {
        let m = self.e.vstack(&self.a.select_rows(&active));
        let lineality = ExactSubspace::kernel((self.dim(), 0), &m);
        Face { dim: lineality.dim(), active, lineality }
    }

    fn enumerate(&self) -> Vec<Face> {
        let Some(root) = self.closure(&BTreeSet::new()) else {
            return Vec::new();
        };
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(root.clone());
        queue.push_back(root);
        let mut faces = Vec::new();
        while let Some(active) = queue.pop_front() {
            for j in 0..self.a.nrows() {
                if active.contains(&j) {
                    continue;
                }
                let mut forced: BTreeSet<usize> = active.iter().copied().collect();
                forced.insert(j);
                if let Some(child) = self.closure(&forced) {
                    if seen.insert(child.clone()) {
                        queue.push_back(child);
                    }
                }
            }
            faces.push(self.face(active));
        }
        faces.sort_by(|x, y| y.dim.cmp(&x.dim).then_with(|| x.active.cmp(&y.active)));
        faces
    }
}

/// All faces of a cone, largest dimension first, ties broken by the
/// lexicographic order of the active sets.
pub fn enumerate_faces(c: &PolyhedralCone) -> Vec<Face> {
    System {
        a: c.ineq().clone(),
        b: zeros(c.ineq().nrows()),
        e: c.eq().clone(),
        ev: zeros(c.eq().nrows()),
    }
    .enumerate()
}

/// All nonempty faces of `{z : A z ≤ b}`, ordered as in [`enumerate_faces`].
pub fn enumerate_set_faces(d: &PolyhedralSet) -> Vec<Face> {
    System { a: d.a().clone(), b: d.b().clone(), e: QMatrix::empty(d.dim()), ev: Vec::new() }.enumerate()
}

/// Rows of `{z : A z ≤ b}` that hold with equality on the whole set, or
/// `None` if the set is empty.
pub fn implied_equalities(d: &PolyhedralSet) -> Option<Vec<usize>> {
    System { a: d.a().clone(), b: d.b().clone(), e: QMatrix::empty(d.dim()), ev: Vec::new() }.closure(&BTreeSet::new())
}

/// Closed active set generated by forcing `forced` rows of a cone to
/// equality. Cones contain the origin, so this never fails.
pub fn cone_closure(c: &PolyhedralCone, forced: &[usize]) -> Vec<usize> {
    System {
        a: c.ineq().clone(),
        b: zeros(c.ineq().nrows()),
        e: c.eq().clone(),
        ev: zeros(c.eq().nrows()),
    }
    .closure(&forced.iter().copied().collect())
    .expect("cones contain the origin")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(ineq: &[&[i64]], k: usize) -> PolyhedralCone {
        let m = if ineq.is_empty() { QMatrix::empty(k) } else { QMatrix::from_i64(ineq) };
        PolyhedralCone::new(m, QMatrix::empty(k)).unwrap()
    }

    #[test]
    fn half_line_has_two_faces() {
        let f = enumerate_faces(&cone(&[&[-1]], 1));
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].dim, f[0].active.clone()), (1, vec![]));
        assert_eq!((f[1].dim, f[1].active.clone()), (0, vec![0]));
    }

    #[test]
    fn orthant_counts() {
        for d in 1..=4 {
            assert_eq!(enumerate_faces(&PolyhedralCone::orthant(d)).len(), 1 << d);
        }
    }

    #[test]
    fn subspace_has_one_face() {
        let c = PolyhedralCone::new(QMatrix::from_i64(&[&[1, 0], &[-1, 0]]), QMatrix::empty(2)).unwrap();
        let f = enumerate_faces(&c);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].active, vec![0, 1]);
        assert_eq!(f[0].dim, 1);
    }

    #[test]
    fn redundant_rows_close_together() {
        // z ≥ 0 written twice plus a scaled copy
        let f = enumerate_faces(&cone(&[&[-1], &[-1], &[-2]], 1));
        assert_eq!(f.len(), 2);
        assert_eq!(f[1].active, vec![0, 1, 2]);
    }

    #[test]
    fn set_faces_of_a_square() {
        let d = PolyhedralSet::new(
            QMatrix::from_i64(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            crate::rational::qvec(&[1, 0, 1, 0]),
        )
        .unwrap();
        let f = enumerate_set_faces(&d);
        assert_eq!(f.len(), 9);
        assert_eq!(f.iter().filter(|x| x.dim == 0).count(), 4);
    }

    #[test]
    fn implied_rows_of_a_segment() {
        // {(z1, z2) : z1 + z2 ≤ 1, z1 + z2 ≥ 1, z1 ≥ 0, z2 ≥ 0}
        let d = PolyhedralSet::new(
            QMatrix::from_i64(&[&[1, 1], &[-1, -1], &[-1, 0], &[0, -1]]),
            crate::rational::qvec(&[1, -1, 0, 0]),
        )
        .unwrap();
        assert_eq!(implied_equalities(&d), Some(vec![0, 1]));
    }

    #[test]
    fn empty_set_has_no_faces() {
        let d = PolyhedralSet::new(QMatrix::from_i64(&[&[1], &[-1]]), crate::rational::qvec(&[-1, 0])).unwrap();
        assert!(enumerate_set_faces(&d).is_empty());
    }
}
