//! Dense two-phase simplex with Bland's rule.
//!
//! The solver is generic over [`LpScalar`] so the same code runs in exact
//! rational arithmetic (every verdict) and in `f64` (fast search inside the
//! sampling oracle, always followed by an exact recheck).

use std::cmp::Ordering;
use std::fmt::Debug;

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub trait LpScalar: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Sign, with whatever tolerance the scalar type needs.
    fn sign(&self) -> Ordering;

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }
    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }
}

impl LpScalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// Pivot and feasibility tolerance of the floating-point instantiation.
pub const F64_EPS: f64 = 1e-9;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> Ordering {
        if *self > F64_EPS {
            Ordering::Greater
        } else if *self < -F64_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// `maximize cᵀx` subject to linear constraints; each variable is either
/// free or nonnegative.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<T>,
    constraints: Vec<Constraint<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn point(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

impl<T: LpScalar> LinearProgram<T> {
    /// All variables free, zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            free: vec![true; num_vars],
            objective: vec![T::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_nonnegative(&mut self, var: usize) -> &mut Self {
        self.free[var] = false;
        self
    }

    pub fn maximize(&mut self, objective: Vec<T>) -> &mut Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    pub fn add(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn le(&mut self, coeffs: Vec<T>, rhs: T) -> &mut Self {
        self.add(coeffs, Relation::Le, rhs)
    }

    pub fn eq(&mut self, coeffs: Vec<T>, rhs: T) -> &mut Self {
        self.add(coeffs, Relation::Eq, rhs)
    }

    pub fn ge(&mut self, coeffs: Vec<T>, rhs: T) -> &mut Self {
        self.add(coeffs, Relation::Ge, rhs)
    }

    pub fn solve(&self) -> LpOutcome<T> {
        Tableau::build(self).run(self)
    }
}

/// Column layout: structural columns (free variables take two), then one
/// slack or surplus per inequality row, then one artificial per row that
/// needs it.
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Structural column pairs `(plus, minus)` per original variable.
    var_cols: Vec<(usize, Option<usize>)>,
    n_struct: usize,
    first_artificial: usize,
    width: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn build(lp: &LinearProgram<T>) -> Self {
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        let mut n_struct = 0;
        for &free in &lp.free {
            if free {
                var_cols.push((n_struct, Some(n_struct + 1)));
                n_struct += 2;
            } else {
                var_cols.push((n_struct, None));
                n_struct += 1;
            }
        }
        let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let first_artificial = n_struct + n_slack;

        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Vec<T>, Relation, T)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_neg() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(T::neg).collect(), rel, c.rhs.neg())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let n_art = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let width = first_artificial + n_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack = n_struct;
        let mut art = first_artificial;
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![T::zero(); width + 1];
            for (v, a) in coeffs.iter().enumerate() {
                let (p, m) = var_cols[v];
                row[p] = a.clone();
                if let Some(m) = m {
                    row[m] = a.neg();
                }
            }
            match rel {
                Relation::Le => {
                    row[slack] = T::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = T::one().neg();
                    slack += 1;
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = T::one();
                    basis.push(art);
                    art += 1;
                }
            }
            row[width] = rhs;
            rows.push(row);
        }
        Tableau { rows, basis, var_cols, n_struct, first_artificial, width }
    }

    fn pivot(&mut self, r: usize, c: usize, cost: &mut [T]) {
        let inv = T::one().div(&self.rows[r][c]);
        for x in self.rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
            row[c] = T::zero();
        }
        if !cost[c].is_zero() {
            let f = cost[c].clone();
            for (x, p) in cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
            cost[c] = T::zero();
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for minimizing `c` over the current basis; the last
    /// entry holds minus the objective value.
    fn reduced_costs(&self, c: &[T]) -> Vec<T> {
        let mut d: Vec<T> = c.to_vec();
        d.push(T::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &c[b];
            if cb.is_zero() {
                continue;
            }
            for (x, a) in d.iter_mut().zip(row) {
                *x = x.sub(&cb.mul(a));
            }
        }
        d
    }

    /// Bland's rule iterations. Returns false if unbounded.
    fn optimize(&mut self, cost: &mut [T], allowed: usize) -> bool {
        loop {
            let Some(enter) = (0..allowed).find(|&j| cost[j].is_neg()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_pos() {
                    continue;
                }
                let ratio = row[self.width].div(&row[enter]);
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => match ratio.compare(lr) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*li],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, enter, cost),
            }
        }
    }

    fn run(mut self, lp: &LinearProgram<T>) -> LpOutcome<T> {
        let w = self.width;
        if self.first_artificial < w {
            let mut c1 = vec![T::zero(); w];
            for x in c1.iter_mut().skip(self.first_artificial) {
                *x = T::one();
            }
            let mut cost = self.reduced_costs(&c1);
            self.optimize(&mut cost, w);
            if cost[w].neg().is_pos() {
                return LpOutcome::Infeasible;
            }
            self.drive_out_artificials();
        }

        let mut c2 = vec![T::zero(); w];
        for (v, obj) in lp.objective.iter().enumerate() {
            let (p, m) = self.var_cols[v];
            c2[p] = obj.neg();
            if let Some(m) = m {
                c2[m] = obj.clone();
            }
        }
        let mut cost = self.reduced_costs(&c2);
        if !self.optimize(&mut cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }

        let mut col_val = vec![T::zero(); self.n_struct];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_struct {
                col_val[b] = row[w].clone();
            }
        }
        let x: Vec<T> = self
            .var_cols
            .iter()
            .map(|&(p, m)| match m {
                Some(m) => col_val[p].sub(&col_val[m]),
                None => col_val[p].clone(),
            })
            .collect();
        let value = x.iter().zip(&lp.objective).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
        LpOutcome::Optimal { x, value }
    }

    /// After a feasible phase one, pivots every artificial out of the basis or
    /// drops its (redundant) row.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        let mut dummy = vec![T::zero(); self.width + 1];
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero()) {
                Some(j) => {
                    self.pivot(r, j, &mut dummy);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }
}

/// Some point of `{x : constraints}` with every variable free.
pub fn feasible_point<T: LpScalar>(num_vars: usize, constraints: Vec<Constraint<T>>) -> Option<Vec<T>> {
    let mut lp = LinearProgram::new(num_vars);
    for c in constraints {
        lp.add(c.coeffs, c.relation, c.rhs);
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Convenience: exact LP over the rationals.
pub type QLinearProgram = LinearProgram<Q>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn textbook_maximum() {
        // max 3x + 2y, x + y ≤ 4, x + 3y ≤ 6, x ≤ 3, x,y ≥ 0 → (3,1), value 11
        let mut lp = QLinearProgram::new(2);
        lp.set_nonnegative(0).set_nonnegative(1);
        lp.maximize(vec![q(3), q(2)]);
        lp.le(vec![q(1), q(1)], q(4));
        lp.le(vec![q(1), q(3)], q(6));
        lp.le(vec![q(1), q(0)], q(3));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(3), q(1)]);
                assert_eq!(value, q(11));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = QLinearProgram::new(1);
        lp.ge(vec![q(1)], q(2)).le(vec![q(1)], q(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = QLinearProgram::new(1);
        lp.maximize(vec![q(1)]).ge(vec![q(1)], q(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y with x - y = -3, x ≥ -5, y ≤ 1  → max -(x+y): x=-5? then y=-2 ≤ 1 ok, value 7
        let mut lp = QLinearProgram::new(2);
        lp.maximize(vec![q(-1), q(-1)]);
        lp.eq(vec![q(1), q(-1)], q(-3));
        lp.ge(vec![q(1), q(0)], q(-5));
        lp.le(vec![q(0), q(1)], q(1));
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![q(-5), q(-2)]);
                assert_eq!(value, q(7));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = QLinearProgram::new(2);
        lp.maximize(vec![q(1), q(0)]);
        lp.eq(vec![q(1), q(1)], q(1));
        lp.eq(vec![q(2), q(2)], q(2));
        lp.ge(vec![q(0), q(1)], qf(1, 3));
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![qf(2, 3), qf(1, 3)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let mut lp = QLinearProgram::new(4);
        for i in 0..4 {
            lp.set_nonnegative(i);
        }
        lp.maximize(vec![qf(3, 4), q(-150), qf(1, 50), q(-6)]);
        lp.le(vec![qf(1, 4), q(-60), qf(-1, 25), q(9)], q(0));
        lp.le(vec![qf(1, 2), q(-90), qf(-1, 50), q(3)], q(0));
        lp.le(vec![q(0), q(0), q(1), q(0)], q(1));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, qf(1, 20)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn float_instantiation_matches() {
        let mut lp = LinearProgram::<f64>::new(2);
        lp.set_nonnegative(0).set_nonnegative(1);
        lp.maximize(vec![3.0, 2.0]);
        lp.le(vec![1.0, 1.0], 4.0);
        lp.le(vec![1.0, 3.0], 6.0);
        lp.le(vec![1.0, 0.0], 3.0);
        let LpOutcome::Optimal { value, .. } = lp.solve() else { panic!() };
        assert!((value - 11.0).abs() < 1e-12);
    }
}
