//! Reference problems with known answers and seeded random generators used
//! by the test suites.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::QMatrix;
use crate::polyhedra::{PolyhedralCone, PolyhedralSet};
use crate::problem::GeProblem;
use crate::rational::{add_vec, neg_vec, q, sub_vec, zeros, Q, QVec};
use crate::subspace::Subspace;

fn affine_at_origin(jf: &[&[i64]], jg: &[&[i64]], d: PolyhedralSet) -> GeProblem {
    let k = d.dim();
    let l = jf[0].len() - k;
    GeProblem::affine(l, k, zeros(l), zeros(k), QMatrix::from_i64(jf), QMatrix::from_i64(jg), zeros(k), zeros(k), d)
        .expect("valid fixture")
}

/// `f(x, y) = −y`, `g(x, y) = y − x`, `D = R_+`, reference `(0, 0)`.
///
/// `Σ(x) = {0, x}` for `x ≤ 0` and empty otherwise: isolatedly calm around
/// the reference without the Aubin property.
pub fn two_branch() -> GeProblem {
    affine_at_origin(&[&[0, -1]], &[&[-1, 1]], PolyhedralSet::orthant(1))
}

/// Closed form of the two-branch solution map, sorted ascending.
pub fn two_branch_solutions(x: &Q) -> Vec<Q> {
    if x.is_zero() {
        vec![q(0)]
    } else if *x < q(0) {
        vec![x.clone(), q(0)]
    } else {
        Vec::new()
    }
}

/// `f(x, y) = x`, `g(x, y) = y`, `D = R`: the solution graph is the line
/// `{(0, y)}`.
pub fn vertical_line() -> GeProblem {
    affine_at_origin(&[&[1, 0]], &[&[0, 1]], PolyhedralSet::whole(1))
}

/// `f(x, y) = (y₂ − x, −y₁ + y₂)`, `g(x, y) = y`, `D = R²_+`.
///
/// The reference solution is isolated, so the single-pair condition holds,
/// but `v = (1, 0)` satisfies the face condition's premise on the face
/// `R_+ × {0}`. Adding `p > 0` to the second component of `f` makes every
/// `(t, 0)` with `0 ≤ t ≤ p` a solution at `x = 0`.
pub fn gap_example() -> GeProblem {
    affine_at_origin(&[&[-1, 0, 1], &[0, -1, 1]], &[&[0, 1, 0], &[0, 0, 1]], PolyhedralSet::orthant(2))
}

/// How a coordinate of a random product set is constrained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Factor {
    Line,
    HalfLine,
    /// `[0, width]`
    Slab(i64),
}

fn small_int(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    q(rng.random_range(-bound..=bound))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_rows(cols, (0..rows).map(|_| (0..cols).map(|_| small_int(rng, 2)).collect()).collect())
}

/// Random affine problem with `l, k ∈ {1, 2, 3}`, `D` a product of lines,
/// half-lines and slabs, integer Jacobian entries in `[−2, 2]` and full row
/// rank `∇g`. The reference `g` value sits on a random boundary or at least
/// 2 away from it; nonzero multipliers have magnitude at least 2.
pub fn random_instance(rng: &mut ChaCha8Rng) -> GeProblem {
    let l = rng.random_range(1..=3);
    let k = rng.random_range(1..=3);
    let mut rows: Vec<QVec> = Vec::new();
    let mut b: QVec = Vec::new();
    let mut gbar = zeros(k);
    let mut dstar = zeros(k);
    for i in 0..k {
        let factor = match rng.random_range(0..3) {
            0 => Factor::Line,
            1 => Factor::HalfLine,
            _ => Factor::Slab(rng.random_range(4..=6)),
        };
        let lower = |rows: &mut Vec<QVec>, b: &mut QVec| {
            let mut r = zeros(k);
            r[i] = q(-1);
            rows.push(r);
            b.push(q(0));
        };
        let multiplier = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { q(0) } else { q(rng.random_range(2..=3)) };
        match factor {
            Factor::Line => gbar[i] = small_int(rng, 2),
            Factor::HalfLine => {
                lower(&mut rows, &mut b);
                if rng.random_bool(0.75) {
                    dstar[i] = -multiplier(rng);
                } else {
                    gbar[i] = q(rng.random_range(2..=3));
                }
            }
            Factor::Slab(w) => {
                lower(&mut rows, &mut b);
                let mut r = zeros(k);
                r[i] = q(1);
                rows.push(r);
                b.push(q(w));
                match rng.random_range(0..3) {
                    0 => dstar[i] = -multiplier(rng),
                    1 => {
                        gbar[i] = q(w);
                        dstar[i] = multiplier(rng);
                    }
                    _ => gbar[i] = q(w / 2),
                }
            }
        }
    }
    let d = PolyhedralSet::new(QMatrix::from_rows(k, rows), b).expect("consistent rows");
    let jg = loop {
        let m = random_matrix(rng, k, l + k);
        if m.rank() == k {
            break m;
        }
    };
    let jf = random_matrix(rng, k, l + k);
    let xbar: QVec = (0..l).map(|_| small_int(rng, 2)).collect();
    let ybar: QVec = (0..k).map(|_| small_int(rng, 2)).collect();
    let z: QVec = xbar.iter().chain(&ybar).cloned().collect();
    let g0 = sub_vec(&gbar, &jg.mul_vec(&z));
    let f0 = sub_vec(&neg_vec(&dstar), &jf.mul_vec(&z));
    GeProblem::affine(l, k, xbar, ybar, jf, jg, f0, g0, d).expect("reference solves the generated problem")
}

/// The `index`-th instance of the seeded suite; each index has its own
/// generator stream.
pub fn random_suite_instance(seed: u64, index: usize) -> GeProblem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    random_instance(&mut rng)
}

pub fn random_suite(seed: u64, count: usize) -> Vec<GeProblem> {
    (0..count).map(|i| random_suite_instance(seed, i)).collect()
}

/// Random cone `{z : A z ≤ 0, E z = 0}` in `R^dim` with small integer data.
/// Zero rows and repeated rows are kept on purpose.
pub fn random_cone(rng: &mut ChaCha8Rng, dim: usize, ineq_rows: usize, eq_rows: usize) -> PolyhedralCone {
    let mut ineq = random_matrix(rng, ineq_rows, dim);
    if ineq_rows >= 2 && rng.random_bool(0.2) {
        let copy = ineq.row(0).clone();
        ineq.push_row(add_vec(&copy, &copy));
    }
    let eq = random_matrix(rng, eq_rows, dim);
    PolyhedralCone::new(ineq, eq).expect("consistent widths")
}

/// Random subspace of `R^(n+m)` with the given split; dimensions from 0 to
/// `n + m`, including rank-deficient spanning sets.
pub fn random_subspace(rng: &mut ChaCha8Rng, split: (usize, usize)) -> Subspace {
    let ambient = split.0 + split.1;
    let d = rng.random_range(0..=ambient);
    let generators = if d > 0 && rng.random_bool(0.25) { d + 1 } else { d };
    let mut cols: Vec<Vec<f64>> = (0..generators.min(d)).map(|_| (0..ambient).map(|_| rng.sample(StandardNormal)).collect()).collect();
    if generators > d {
        // a redundant generator in the span of the others
        let extra: Vec<f64> = (0..ambient).map(|j| cols.iter().map(|c| c[j]).sum()).collect();
        cols.push(extra);
    }
    Subspace::span(&cols, split).expect("consistent lengths")
}

/// Random subspace of dimension exactly `n` with split `(n, m)`, as needed
/// for adjoints.
pub fn random_square_subspace(rng: &mut ChaCha8Rng, split: (usize, usize)) -> Subspace {
    let ambient = split.0 + split.1;
    let cols: Vec<Vec<f64>> = (0..split.0).map(|_| (0..ambient).map(|_| rng.sample(StandardNormal)).collect()).collect();
    Subspace::span(&cols, split).expect("consistent lengths")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_branch_closed_form() {
        assert_eq!(two_branch_solutions(&q(-1)), vec![q(-1), q(0)]);
        assert_eq!(two_branch_solutions(&q(0)), vec![q(0)]);
        assert!(two_branch_solutions(&q(1)).is_empty());
    }

    #[test]
    fn suite_is_reproducible() {
        let a = random_suite(11, 20);
        let b = random_suite(11, 20);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| p.jg_full_row_rank()));
        assert!(a.iter().any(|p| p.d().num_rows() > 0));
    }
}
