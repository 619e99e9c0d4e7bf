//! Stability conditions at a reference solution, decided exactly.
//!
//! Each condition asks whether some polyhedral cone or subspace built from
//! the problem data is trivial. A failing verdict carries a rational witness
//! that is substituted back into the condition's premise before it is
//! reported.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::calculus::{extend_to_f, sc_derivative_h, ScdCollection};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::polyhedra::{enumerate_faces, in_normal_graph, Face, FacePair, PolyhedralCone};
use crate::problem::GeProblem;
use crate::rational::{add_vec, format_vec, is_zero_vec, neg_vec, QVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// Every dual member of the extended map `F` meets `R^n × {0}` trivially.
    ScdRegular,
    /// `((0, v), 0) ∈ L ⇒ v = 0` for every primal member of `H`.
    Primal,
    /// `(w*, (u*, 0)) ∈ L* ⇒ (w*, u*) = 0` for every dual member of `H`.
    Dual,
    /// `∇_y g v ∈ F − F`, `−∇_y f v ∈ (F − F)⊥ ⇒ v = 0` for every face `F`
    /// of the critical cone.
    Face,
    /// `(∇_y g v, −∇_y f v) ∈ gph N_{F1 − F2} ⇒ v = 0` for all nested faces.
    FacePair,
    /// The pair condition for the single pair (critical cone, minimal face):
    /// isolated calmness at the reference point only.
    Point,
    /// Coderivative test for the Aubin property.
    Aubin,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::ScdRegular,
        Condition::Primal,
        Condition::Dual,
        Condition::Face,
        Condition::FacePair,
        Condition::Point,
        Condition::Aubin,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::ScdRegular => "scd_regular",
            Condition::Primal => "primal",
            Condition::Dual => "dual",
            Condition::Face => "face",
            Condition::FacePair => "facepair",
            Condition::Point => "point",
            Condition::Aubin => "aubin",
        }
    }

    pub fn from_id(id: &str) -> Option<Condition> {
        Condition::ALL.into_iter().find(|c| c.id() == id)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
        }
    }
}

/// Nonzero certificate of failure. Which fields are set depends on the
/// condition: `v` (primal, face, facepair, point), `w_star`/`u_star` (dual),
/// `v_star` (scd_regular), `w_star`/`z_star`/`u_star` (aubin).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub v: Option<QVec>,
    pub v_star: Option<QVec>,
    pub w_star: Option<QVec>,
    pub u_star: Option<QVec>,
    pub z_star: Option<QVec>,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        for (key, val) in [
            ("v", &self.v),
            ("v_star", &self.v_star),
            ("w_star", &self.w_star),
            ("u_star", &self.u_star),
            ("z_star", &self.z_star),
        ] {
            if let Some(v) = val {
                m.insert(key.into(), json!(format_vec(v)));
            }
        }
        Value::Object(m)
    }
}

/// Where a failure came from, as row indices of `D`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    /// Active rows of the responsible face.
    pub face: Option<Vec<usize>>,
    /// Active rows of the outer and inner face of the responsible pair.
    pub pair: Option<(Vec<usize>, Vec<usize>)>,
    /// Rows tight on the piece of `gph N_{F1 − F2}` that carries the witness.
    pub piece: Option<Vec<usize>>,
}

impl Provenance {
    pub fn to_json(&self) -> Value {
        json!({
            "face": self.face,
            "pair": self.pair.as_ref().map(|(a, b)| vec![a.clone(), b.clone()]),
            "piece": self.piece,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub provenance: Provenance,
}

impl ConditionReport {
    fn holds(condition: Condition) -> Self {
        ConditionReport { condition, verdict: Verdict::Holds, witness: None, provenance: Provenance::default() }
    }

    fn fails(condition: Condition, witness: Witness, provenance: Provenance) -> Self {
        ConditionReport { condition, verdict: Verdict::Fails, witness: Some(witness), provenance }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "condition": self.condition.id(),
            "verdict": self.verdict.as_str(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "provenance": self.provenance.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Whether the calculus ran on the augmented problem because `∇g` lacks
    /// full row rank.
    pub augmented: bool,
    pub reports: Vec<ConditionReport>,
}

impl StabilityReport {
    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(|r| r.verdict == Verdict::Holds)
    }

    pub fn get(&self, c: Condition) -> Option<&ConditionReport> {
        self.reports.iter().find(|r| r.condition == c)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "augmented": self.augmented,
            "all_hold": self.all_hold(),
            "conditions": self.reports.iter().map(ConditionReport::to_json).collect::<Vec<_>>(),
        })
    }
}

/// All derived data of one problem, shared by the individual checks.
pub struct Analysis {
    problem: GeProblem,
    reg: GeProblem,
    augmented: bool,
    k_cone: PolyhedralCone,
    rows: Vec<usize>,
    faces: Vec<Face>,
    pairs: Vec<FacePair>,
    primal_h: ScdCollection,
    dual_h: ScdCollection,
    dual_f: ScdCollection,
}

fn d_rows(active: &[usize], rows: &[usize]) -> Vec<usize> {
    active.iter().map(|&i| rows[i]).collect()
}

/// First `Some` in order, computed in parallel.
fn first_hit<'a, T, F, R>(items: &'a [T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&'a T) -> Option<R> + Sync + Send,
{
    items.par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().next()
}

impl Analysis {
    pub fn new(problem: &GeProblem) -> Result<Self> {
        let (reg, augmented) = problem.regularized();
        let k_cone = problem.critical_cone();
        let rows = problem.critical_rows();
        let faces = enumerate_faces(&k_cone);
        let mut pairs = Vec::new();
        for f1 in &faces {
            for f2 in &faces {
                if f1.contains_face(f2) {
                    pairs.push(FacePair::new(&k_cone, f1, f2));
                }
            }
        }
        let (primal_h, dual_h) = sc_derivative_h(problem)?;
        let (_, dual_f) = extend_to_f(&primal_h, &dual_h);
        Ok(Analysis { problem: problem.clone(), reg, augmented, k_cone, rows, faces, pairs, primal_h, dual_h, dual_f })
    }

    pub fn problem(&self) -> &GeProblem {
        &self.problem
    }

    pub fn augmented(&self) -> bool {
        self.augmented
    }

    pub fn critical_cone(&self) -> &PolyhedralCone {
        &self.k_cone
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Rows of `D` tight on a face of the critical cone.
    pub fn face_rows(&self, f: &Face) -> Vec<usize> {
        d_rows(&f.active, &self.rows)
    }

    pub fn pairs(&self) -> &[FacePair] {
        &self.pairs
    }

    pub fn primal_h(&self) -> &ScdCollection {
        &self.primal_h
    }

    pub fn dual_h(&self) -> &ScdCollection {
        &self.dual_h
    }

    pub fn dual_f(&self) -> &ScdCollection {
        &self.dual_f
    }

    pub fn check(&self, c: Condition) -> ConditionReport {
        let report = match c {
            Condition::ScdRegular => check_scd_regular(&self.dual_f).expect("square split by construction"),
            Condition::Primal => check_primal(&self.primal_h).expect("consistent split"),
            Condition::Dual => check_dual(&self.dual_h).expect("consistent split"),
            Condition::Face => self.check_face(),
            Condition::FacePair => self.check_pairs(Condition::FacePair, &self.pairs),
            Condition::Point => {
                let outer = self.faces.first().expect("the cone itself is a face");
                let inner = self.faces.last().expect("nonempty lattice");
                let pair = FacePair::new(&self.k_cone, outer, inner);
                self.check_pairs(Condition::Point, std::slice::from_ref(&pair))
            }
            Condition::Aubin => self.check_aubin(),
        };
        assert!(
            self.verify_witness(&report),
            "{} witness failed exact re-verification",
            report.condition
        );
        report
    }

    /// Runs the given conditions on a pool of `workers` threads.
    pub fn check_all(&self, conditions: &[Condition], workers: usize) -> StabilityReport {
        let run = || conditions.par_iter().map(|&c| self.check(c)).collect::<Vec<_>>();
        let reports = match rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
        StabilityReport { augmented: self.augmented, reports }
    }

    fn check_face(&self) -> ConditionReport {
        let gy = self.reg.gy();
        let fy = self.reg.fy();
        let k = self.reg.k();
        let hit = first_hit(&self.faces, |f| {
            let normals = f.lineality.constraint_matrix().mul(&gy);
            let span_t = QMatrix::from_rows(k, f.lineality.basis().to_vec()).mul(&fy);
            normals.vstack(&span_t).nullspace().into_iter().next().map(|v| (f, v))
        });
        match hit {
            None => ConditionReport::holds(Condition::Face),
            Some((f, v)) => ConditionReport::fails(
                Condition::Face,
                Witness { v: Some(v), ..Witness::default() },
                Provenance { face: Some(self.face_rows(f)), ..Provenance::default() },
            ),
        }
    }

    /// For each pair and each face `G` of `C = F1 − F2`, the cone of `v` with
    /// `∇_y g v ∈ G` and `−∇_y f v ∈ C° ∩ G⊥`; `gph N_C` is the union of the
    /// sets `G × (C° ∩ G⊥)`.
    fn check_pairs(&self, condition: Condition, pairs: &[FacePair]) -> ConditionReport {
        let gy = self.reg.gy();
        let minus_fy = self.reg.fy().neg();
        let k = self.reg.k();
        let hit = first_hit(pairs, |pair| {
            let c = &pair.cone;
            let polar_part = c.polar().preimage(&minus_fy);
            let extra: Vec<usize> =
                pair.inner.active.iter().copied().filter(|i| !pair.outer.active.contains(i)).collect();
            for g in enumerate_faces(c) {
                let perp = QMatrix::from_rows(k, g.lineality.basis().to_vec()).mul(&minus_fy);
                let piece = g.as_cone(c).preimage(&gy).intersect(&polar_part).with_equalities(&perp);
                if let Some(v) = piece.nonzero_element() {
                    let mut tight: Vec<usize> = pair.outer.active.clone();
                    tight.extend(g.active.iter().map(|&i| extra[i]));
                    tight.sort_unstable();
                    return Some((pair, d_rows(&tight, &self.rows), v));
                }
            }
            None
        });
        match hit {
            None => ConditionReport::holds(condition),
            Some((pair, piece, v)) => ConditionReport::fails(
                condition,
                Witness { v: Some(v), ..Witness::default() },
                Provenance {
                    pair: Some((self.face_rows(&pair.outer), self.face_rows(&pair.inner))),
                    piece: Some(piece),
                    ..Provenance::default()
                },
            ),
        }
    }

    /// Per pair: `z* ∈ C°`, `−w* ∈ C`, `∇_y fᵀ w* + ∇_y gᵀ z* = 0`, and
    /// `(w*, u*) ≠ 0` with `u* = ∇_x fᵀ w* + ∇_x gᵀ z*`.
    fn check_aubin(&self) -> ConditionReport {
        let k = self.reg.k();
        let p = self.reg.l();
        let ik = QMatrix::identity(k);
        let zk = QMatrix::zeros(k, k);
        let sel_w = ik.hstack(&zk);
        let sel_z = zk.hstack(&ik);
        let balance = self.reg.fy().transpose().hstack(&self.reg.gy().transpose());
        let u_map = self.reg.fx().transpose().hstack(&self.reg.gx().transpose());
        let designated = sel_w.vstack(&u_map);
        debug_assert_eq!(designated.nrows(), k + p);
        let hit = first_hit(&self.pairs, |pair| {
            let c = &pair.cone;
            let cone = c.polar().preimage(&sel_z).intersect(&c.preimage(&sel_w.neg())).with_equalities(&balance);
            cone.element_outside_kernel(&designated).map(|x| (pair, x))
        });
        match hit {
            None => ConditionReport::holds(Condition::Aubin),
            Some((pair, x)) => {
                let w = x[..k].to_vec();
                let z = x[k..].to_vec();
                let u = u_map.mul_vec(&x);
                ConditionReport::fails(
                    Condition::Aubin,
                    Witness { w_star: Some(w), z_star: Some(z), u_star: Some(u), ..Witness::default() },
                    Provenance {
                        pair: Some((self.face_rows(&pair.outer), self.face_rows(&pair.inner))),
                        ..Provenance::default()
                    },
                )
            }
        }
    }

    fn find_pair(&self, prov: &Provenance) -> Option<FacePair> {
        let (outer, inner) = prov.pair.as_ref()?;
        let f1 = self.faces.iter().find(|f| &self.face_rows(f) == outer)?;
        let f2 = self.faces.iter().find(|f| &self.face_rows(f) == inner)?;
        f1.contains_face(f2).then(|| FacePair::new(&self.k_cone, f1, f2))
    }

    /// Substitutes a failure witness back into the premise of its condition,
    /// in exact arithmetic. Reports without a witness verify trivially when
    /// they hold.
    pub fn verify_witness(&self, report: &ConditionReport) -> bool {
        let Some(w) = &report.witness else {
            return report.verdict == Verdict::Holds;
        };
        if report.verdict != Verdict::Fails {
            return false;
        }
        let gy = self.reg.gy();
        let fy = self.reg.fy();
        match report.condition {
            Condition::Primal => {
                let Some(v) = &w.v else { return false };
                member_for(&self.primal_h, &report.provenance).is_some_and(|m| {
                    let mut z = crate::rational::zeros(self.primal_h.param_dim);
                    z.extend(v.iter().cloned());
                    z.extend(crate::rational::zeros(self.reg.k()));
                    !is_zero_vec(v) && m.contains(&z)
                })
            }
            Condition::Dual => {
                let (Some(ws), Some(us)) = (&w.w_star, &w.u_star) else { return false };
                member_for(&self.dual_h, &report.provenance).is_some_and(|m| {
                    let mut z = ws.clone();
                    z.extend(us.iter().cloned());
                    z.extend(crate::rational::zeros(self.reg.k()));
                    !(is_zero_vec(ws) && is_zero_vec(us)) && m.contains(&z)
                })
            }
            Condition::ScdRegular => {
                let Some(vs) = &w.v_star else { return false };
                member_for(&self.dual_f, &report.provenance).is_some_and(|m| {
                    let mut z = vs.clone();
                    z.extend(crate::rational::zeros(vs.len()));
                    !is_zero_vec(vs) && m.contains(&z)
                })
            }
            Condition::Face => {
                let Some(v) = &w.v else { return false };
                let Some(face) = report.provenance.face.as_ref().and_then(|rows| {
                    self.faces.iter().find(|f| &self.face_rows(f) == rows)
                }) else {
                    return false;
                };
                !is_zero_vec(v)
                    && face.lineality.contains(&gy.mul_vec(v))
                    && face.lineality.complement().contains(&neg_vec(&fy.mul_vec(v)))
            }
            Condition::FacePair | Condition::Point => {
                let Some(v) = &w.v else { return false };
                let Some(pair) = self.find_pair(&report.provenance) else { return false };
                !is_zero_vec(v) && in_normal_graph(&pair.cone, &gy.mul_vec(v), &neg_vec(&fy.mul_vec(v)))
            }
            Condition::Aubin => {
                let (Some(ws), Some(zs), Some(us)) = (&w.w_star, &w.z_star, &w.u_star) else { return false };
                let Some(pair) = self.find_pair(&report.provenance) else { return false };
                let balance = add_vec(&fy.tr_mul_vec(ws), &gy.tr_mul_vec(zs));
                let u = add_vec(&self.reg.fx().tr_mul_vec(ws), &self.reg.gx().tr_mul_vec(zs));
                pair.cone.polar().contains(zs)
                    && pair.cone.contains(&neg_vec(ws))
                    && balance.iter().all(Zero::is_zero)
                    && &u == us
                    && !(is_zero_vec(ws) && is_zero_vec(us))
            }
        }
    }
}

fn member_for<'a>(coll: &'a ScdCollection, prov: &Provenance) -> Option<&'a crate::subspace::ExactSubspace> {
    let face = prov.face.as_ref()?;
    coll.members.iter().find(|m| &m.face == face).map(|m| &m.subspace)
}

fn zero_mask(len: usize, zeroed: std::ops::Range<usize>) -> Vec<bool> {
    (0..len).map(|i| zeroed.contains(&i)).collect()
}

/// `((0, v), 0) ∈ L ⇒ v = 0` for each member of a primal collection of `H`.
pub fn check_primal(coll: &ScdCollection) -> Result<ConditionReport> {
    let p = coll.param_dim;
    for m in &coll.members {
        let (n, k) = m.subspace.split();
        if n < p {
            return Err(Error::Dimension("member split smaller than the parameter block".into()));
        }
        let mut mask = zero_mask(n + k, 0..p);
        for x in mask.iter_mut().skip(n) {
            *x = true;
        }
        if let Some(z) = m.subspace.intersect_coordinate(&mask).witness().cloned() {
            return Ok(ConditionReport::fails(
                Condition::Primal,
                Witness { v: Some(z[p..n].to_vec()), ..Witness::default() },
                Provenance { face: Some(m.face.clone()), ..Provenance::default() },
            ));
        }
    }
    Ok(ConditionReport::holds(Condition::Primal))
}

/// `(w*, (u*, 0)) ∈ L* ⇒ w* = 0, u* = 0` for each member of a dual
/// collection of `H`.
pub fn check_dual(coll: &ScdCollection) -> Result<ConditionReport> {
    let p = coll.param_dim;
    for m in &coll.members {
        let (k, n) = m.subspace.split();
        if n < p {
            return Err(Error::Dimension("member split smaller than the parameter block".into()));
        }
        let mask = zero_mask(k + n, (k + p)..(k + n));
        if let Some(z) = m.subspace.intersect_coordinate(&mask).witness().cloned() {
            return Ok(ConditionReport::fails(
                Condition::Dual,
                Witness { w_star: Some(z[..k].to_vec()), u_star: Some(z[k..k + p].to_vec()), ..Witness::default() },
                Provenance { face: Some(m.face.clone()), ..Provenance::default() },
            ));
        }
    }
    Ok(ConditionReport::holds(Condition::Dual))
}

/// `(v*, 0) ∈ L* ⇒ v* = 0` for each member of a dual collection with a
/// square split.
pub fn check_scd_regular(coll: &ScdCollection) -> Result<ConditionReport> {
    for m in &coll.members {
        let (a, b) = m.subspace.split();
        if a != b {
            return Err(Error::Dimension(format!("regularity needs a square split, found ({a}, {b})")));
        }
        let mask = zero_mask(a + b, a..(a + b));
        if let Some(z) = m.subspace.intersect_coordinate(&mask).witness().cloned() {
            return Ok(ConditionReport::fails(
                Condition::ScdRegular,
                Witness { v_star: Some(z[..a].to_vec()), ..Witness::default() },
                Provenance { face: Some(m.face.clone()), ..Provenance::default() },
            ));
        }
    }
    Ok(ConditionReport::holds(Condition::ScdRegular))
}

pub fn check_face(p: &GeProblem) -> Result<ConditionReport> {
    Ok(Analysis::new(p)?.check(Condition::Face))
}

pub fn check_facepair(p: &GeProblem) -> Result<ConditionReport> {
    Ok(Analysis::new(p)?.check(Condition::FacePair))
}

pub fn check_point(p: &GeProblem) -> Result<ConditionReport> {
    Ok(Analysis::new(p)?.check(Condition::Point))
}

pub fn check_aubin(p: &GeProblem) -> Result<ConditionReport> {
    Ok(Analysis::new(p)?.check(Condition::Aubin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Kind, Member};
    use crate::polyhedra::PolyhedralSet;
    use crate::rational::{q, qvec};
    use crate::subspace::ExactSubspace;

    fn problem(jf: &[&[i64]], jg: &[&[i64]], d: PolyhedralSet) -> GeProblem {
        let k = d.dim();
        let l = jf[0].len() - k;
        GeProblem::affine(
            l,
            k,
            crate::rational::zeros(l),
            crate::rational::zeros(k),
            QMatrix::from_i64(jf),
            QMatrix::from_i64(jg),
            crate::rational::zeros(k),
            crate::rational::zeros(k),
            d,
        )
        .unwrap()
    }

    fn two_branch() -> GeProblem {
        problem(&[&[0, -1]], &[&[-1, 1]], PolyhedralSet::orthant(1))
    }

    #[test]
    fn two_branch_verdicts() {
        let a = Analysis::new(&two_branch()).unwrap();
        let r = a.check_all(&Condition::ALL, 1);
        for c in [
            Condition::ScdRegular,
            Condition::Primal,
            Condition::Dual,
            Condition::Face,
            Condition::FacePair,
            Condition::Point,
        ] {
            assert_eq!(r.get(c).unwrap().verdict, Verdict::Holds, "{c}");
        }
        let aubin = r.get(Condition::Aubin).unwrap();
        assert_eq!(aubin.verdict, Verdict::Fails);
        let w = aubin.witness.as_ref().unwrap();
        // normalized to the class w* = -1, z* = -1, u* = 1
        let s = -w.w_star.as_ref().unwrap()[0].clone();
        assert!(s > q(0));
        assert_eq!(w.z_star.as_ref().unwrap()[0].clone() / &s, q(-1));
        assert_eq!(w.u_star.as_ref().unwrap()[0].clone() / &s, q(1));
        assert_eq!(aubin.provenance.pair, Some((vec![], vec![0])));
    }

    #[test]
    fn degenerate_zero_map_fails_everywhere() {
        // f ≡ 0, g(x, y) = y, D = R
        let p = problem(&[&[0, 0]], &[&[0, 1]], PolyhedralSet::whole(1));
        let a = Analysis::new(&p).unwrap();
        for c in [Condition::Primal, Condition::Dual, Condition::Face, Condition::FacePair, Condition::Point] {
            let r = a.check(c);
            assert_eq!(r.verdict, Verdict::Fails, "{c}");
            assert!(a.verify_witness(&r));
        }
    }

    #[test]
    fn identity_complementarity_holds() {
        let p = problem(
            &[&[0, 1, 0], &[0, 0, 1]],
            &[&[0, 1, 0], &[0, 0, 1]],
            PolyhedralSet::orthant(2),
        );
        let a = Analysis::new(&p).unwrap();
        assert_eq!(a.faces().len(), 4);
        assert!(a.check_all(&Condition::ALL, 2).all_hold());
    }

    #[test]
    fn smooth_invertible_case_holds() {
        let p = problem(&[&[1, 2]], &[&[0, 1]], PolyhedralSet::whole(1));
        assert!(Analysis::new(&p).unwrap().check_all(&Condition::ALL, 1).all_hold());
    }

    #[test]
    fn strongly_monotone_vi_has_aubin() {
        let p = problem(
            &[&[1, 2, 1], &[0, 1, 3]],
            &[&[0, 1, 0], &[0, 0, 1]],
            PolyhedralSet::orthant(2),
        );
        assert_eq!(check_aubin(&p).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn collection_level_checks() {
        let padded = ScdCollection {
            kind: Kind::Primal,
            param_dim: 1,
            augmented: false,
            members: vec![Member {
                subspace: ExactSubspace::span((2, 1), &[qvec(&[0, 1, 0]), qvec(&[1, 0, 0])]),
                face: vec![],
            }],
        };
        let r = check_primal(&padded).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        assert_eq!(r.witness.unwrap().v, Some(qvec(&[1])));

        let dual = ScdCollection {
            kind: Kind::Dual,
            param_dim: 1,
            augmented: false,
            members: vec![Member { subspace: ExactSubspace::span((1, 2), &[qvec(&[1, 0, 0])]), face: vec![] }],
        };
        let r = check_dual(&dual).unwrap();
        assert_eq!(r.witness.unwrap().w_star, Some(qvec(&[1])));

        let zero_map = ScdCollection {
            kind: Kind::Dual,
            param_dim: 0,
            augmented: false,
            members: vec![Member { subspace: ExactSubspace::span((1, 1), &[qvec(&[1, 0])]), face: vec![] }],
        };
        assert_eq!(check_scd_regular(&zero_map).unwrap().verdict, Verdict::Fails);
        let invertible = ScdCollection {
            members: vec![Member { subspace: ExactSubspace::span((1, 1), &[qvec(&[1, 3])]), face: vec![] }],
            ..zero_map.clone()
        };
        assert_eq!(check_scd_regular(&invertible).unwrap().verdict, Verdict::Holds);
        let rect = ScdCollection {
            members: vec![Member { subspace: ExactSubspace::span((2, 1), &[qvec(&[1, 0, 0])]), face: vec![] }],
            ..zero_map
        };
        assert!(check_scd_regular(&rect).is_err());
    }

    #[test]
    fn report_json_shape() {
        let a = Analysis::new(&two_branch()).unwrap();
        let r = a.check(Condition::Aubin).to_json();
        assert_eq!(r["condition"], "aubin");
        assert_eq!(r["verdict"], "fails");
        assert!(r["witness"]["w_star"].is_array());
        assert_eq!(r["provenance"]["pair"], json!([[], [0]]));
        let h = a.check(Condition::Face).to_json();
        assert_eq!(h["witness"], Value::Null);
    }
}
