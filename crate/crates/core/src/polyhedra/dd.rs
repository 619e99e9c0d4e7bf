//! Double description: generators of `{z : A z ≤ 0, E z = 0}`.
//!
//! Starts from the kernel of `E` as lineality and adds one inequality at a
//! time. An inequality that cuts the current lineality turns one lineality
//! direction into a ray; otherwise rays are split by sign and adjacent
//! positive/negative pairs are combined (combinatorial adjacency test on the
//! sets of tight rows).

use num_traits::{Signed, Zero};

use super::PolyhedralCone;
use crate::linalg::project_onto_span;
use crate::rational::{dot, neg_vec, primitive, sub_vec, Q, QVec};
use crate::subspace::ExactSubspace;

/// `C = span(lineality) + cone(rays)`. Lineality is a canonical basis, rays
/// are primitive integer vectors orthogonal to the lineality, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub lineality: Vec<QVec>,
    pub rays: Vec<QVec>,
}

struct Ray {
    v: QVec,
    /// Processed inequality rows that are tight on this ray.
    tight: Vec<bool>,
}

fn axpy(v: &mut QVec, s: &Q, x: &[Q]) {
    for (a, b) in v.iter_mut().zip(x) {
        *a += s * b;
    }
}

pub(super) fn generators(c: &PolyhedralCone) -> Generators {
    let k = c.dim();
    let mut lin: Vec<QVec> = c.eq().nullspace();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in c.ineq().rows().iter().enumerate() {
        let lv: Vec<Q> = lin.iter().map(|l| dot(a, l)).collect();
        if let Some(p) = lv.iter().position(|x| !x.is_zero()) {
            let mut l0 = lin.remove(p);
            let mut a0 = lv[p].clone();
            if a0.is_positive() {
                l0 = neg_vec(&l0);
                a0 = -a0;
            }
            let rest: Vec<Q> = lv.iter().enumerate().filter(|(i, _)| *i != p).map(|(_, x)| x.clone()).collect();
            for (l, al) in lin.iter_mut().zip(&rest) {
                if !al.is_zero() {
                    axpy(l, &(-(al / &a0)), &l0);
                }
            }
            for r in rays.iter_mut() {
                let ar = dot(a, &r.v);
                if !ar.is_zero() {
                    axpy(&mut r.v, &(-(ar / &a0)), &l0);
                    r.v = primitive(&r.v);
                }
                r.tight.push(true);
            }
            // Earlier rows vanish on the old lineality, hence on l0.
            let mut tight = vec![true; idx];
            tight.push(false);
            rays.push(Ray { v: primitive(&l0), tight });
            continue;
        }

        let signs: Vec<Q> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &pi in &pos {
            for &ni in &neg {
                if !adjacent(&rays, pi, ni) {
                    continue;
                }
                let (p, n) = (&rays[pi], &rays[ni]);
                // (a·p) n − (a·n) p lies on a·z = 0 and is a nonnegative combination.
                let mut v: QVec = n.v.iter().map(|x| x * &signs[pi]).collect();
                axpy(&mut v, &(-signs[ni].clone()), &p.v);
                let mut tight: Vec<bool> = p.tight.iter().zip(&n.tight).map(|(x, y)| *x && *y).collect();
                tight.push(true);
                next.push(Ray { v: primitive(&v), tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if signs[i].is_positive() {
                continue;
            }
            r.tight.push(signs[i].is_zero());
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
    }

    let lineality = ExactSubspace::span((k, 0), &lin).basis().to_vec();
    let mut out: Vec<QVec> = rays
        .into_iter()
        .map(|r| primitive(&sub_vec(&r.v, &project_onto_span(&lineality, &r.v))))
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    out.sort();
    out.dedup();
    Generators { lineality, rays: out }
}

/// `p` and `n` are adjacent iff no third ray is tight on every row where
/// both are tight.
fn adjacent(rays: &[Ray], p: usize, n: usize) -> bool {
    let common: Vec<usize> = rays[p]
        .tight
        .iter()
        .zip(&rays[n].tight)
        .enumerate()
        .filter(|(_, (x, y))| **x && **y)
        .map(|(i, _)| i)
        .collect();
    !rays
        .iter()
        .enumerate()
        .any(|(i, r)| i != p && i != n && common.iter().all(|&j| r.tight[j]))
}
