//! Ground truth for affine problems: the solution graph as an explicit
//! union of polyhedra, and a seeded sampling search for calmness violations
//! around the reference point.
//!
//! Sampling is only evidence when it finds nothing. A reported violation is
//! recomputed in exact arithmetic first and is therefore a proof.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::lp::{LinearProgram, LpOutcome};
use crate::polyhedra::{enumerate_set_faces, implied_equalities, tangent_cone, PolyhedralCone, PolyhedralSet};
use crate::problem::GeProblem;
use crate::rational::{add_vec, dot, format_vec, scale_vec, sub_vec, to_f64, vec_to_f64, Q, QVec};

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";
/// Probes per anchor: one at zero distance, then spheres of radius
/// `radius · 2^-j` for `j = 0..6`.
pub const PROBES_PER_ANCHOR: usize = 8;
/// The neighborhood of an anchor's decision is a box of this fraction of the
/// sampling radius.
pub const NEIGHBORHOOD_FRACTION: f64 = 0.1;
/// Floating-point displacements below this are not worth an exact recheck.
const FLOAT_SLACK: f64 = 1e-7;
/// Random reals are rounded to multiples of `2^-GRID_BITS` before entering
/// exact arithmetic.
const GRID_BITS: u32 = 24;

fn grid(x: f64) -> Q {
    let scale = (1u64 << GRID_BITS) as f64;
    Q::new(BigInt::from((x * scale).round() as i64), BigInt::from(1u64 << GRID_BITS))
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn inf_norm(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

fn concat(x: &[Q], y: &[Q]) -> QVec {
    x.iter().chain(y).cloned().collect()
}

/// One convex piece of `gph Σ`: the points with `g(x, y)` in the face of `D`
/// with active rows `face` and `−f(x, y)` in the cone spanned by those rows.
#[derive(Clone, Debug)]
pub struct Piece {
    pub set: PolyhedralSet,
    pub face: Vec<usize>,
    /// Basis of the direction space of the affine hull.
    directions: Vec<QVec>,
}

impl Piece {
    fn new(set: PolyhedralSet, face: Vec<usize>) -> Option<Self> {
        let implied = implied_equalities(&set)?;
        let directions = set.a().select_rows(&implied).nullspace();
        Some(Piece { set, face, directions })
    }

    /// Largest `t ≥ 0` with `z + t d` in the piece, or `None` when unbounded.
    fn ray_limit(&self, z: &[Q], d: &[Q]) -> Option<Q> {
        self.set
            .a()
            .rows()
            .iter()
            .zip(self.set.b())
            .filter_map(|(r, b)| {
                let rate = dot(r, d);
                rate.is_positive().then(|| (b - dot(r, z)) / rate)
            })
            .min()
    }
}

#[derive(Clone, Debug)]
pub struct SolutionGraph {
    l: usize,
    k: usize,
    pieces: Vec<Piece>,
    xbar: QVec,
    ybar: QVec,
    /// Pieces through the reference point.
    at_reference: Vec<usize>,
}

/// `gph Σ` as the union over faces `Φ` of `D` (active rows `I`) of
/// `{(x, y) : g(x, y) ∈ Φ, −f(x, y) ∈ cone{A_i : i ∈ I}}`.
pub fn build_solution_graph(p: &GeProblem) -> Result<SolutionGraph> {
    let (Some(f0), Some(g0)) = (p.f0(), p.g0()) else {
        return Err(Error::InvalidArgument("oracle requires affine data".into()));
    };
    let (l, k) = (p.l(), p.k());
    let n = l + k;
    let d = p.d();
    let jf = p.jf();
    let jg = p.jg();
    // rows of D pulled back through g: A Jg z ≤ b − A g0
    let ag = d.a().mul(jg);
    let bg: QVec = sub_vec(d.b(), &d.a().mul_vec(g0));
    let mut pieces = Vec::new();
    for face in enumerate_set_faces(d) {
        let mut rows: Vec<QVec> = Vec::new();
        let mut rhs: QVec = Vec::new();
        for (i, (row, b)) in ag.rows().iter().zip(&bg).enumerate() {
            rows.push(row.clone());
            rhs.push(b.clone());
            if face.active.contains(&i) {
                rows.push(row.iter().map(|x| -x).collect());
                rhs.push(-b.clone());
            }
        }
        let spanned = PolyhedralCone::new(d.a().select_rows(&face.active), QMatrix::empty(k))?.polar();
        // −(Jf z + f0) ∈ {w : P w ≤ 0, E w = 0}
        let minus_jf = jf.neg();
        let pj = spanned.ineq().mul(&minus_jf);
        let pf = spanned.ineq().mul_vec(f0);
        for (r, c) in pj.rows().iter().zip(&pf) {
            rows.push(r.clone());
            rhs.push(c.clone());
        }
        let ej = spanned.eq().mul(&minus_jf);
        let ef = spanned.eq().mul_vec(f0);
        for (r, c) in ej.rows().iter().zip(&ef) {
            rows.push(r.clone());
            rhs.push(c.clone());
            rows.push(r.iter().map(|x| -x).collect());
            rhs.push(-c.clone());
        }
        let set = PolyhedralSet::new(QMatrix::from_rows(n, rows), rhs)?;
        if let Some(piece) = Piece::new(set, face.active) {
            pieces.push(piece);
        }
    }
    let reference = concat(p.xbar(), p.ybar());
    let at_reference: Vec<usize> = (0..pieces.len()).filter(|&i| pieces[i].set.contains(&reference)).collect();
    if at_reference.is_empty() {
        return Err(Error::NotASolution("reference point lies on no piece of the solution graph".into()));
    }
    Ok(SolutionGraph { l, k, pieces, xbar: p.xbar().clone(), ybar: p.ybar().clone(), at_reference })
}

impl SolutionGraph {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn reference(&self) -> (&QVec, &QVec) {
        (&self.xbar, &self.ybar)
    }

    pub fn contains(&self, x: &[Q], y: &[Q]) -> bool {
        let z = concat(x, y);
        self.pieces.iter().any(|p| p.set.contains(&z))
    }

    fn pieces_through(&self, z: &[Q]) -> Vec<usize> {
        (0..self.pieces.len()).filter(|&i| self.pieces[i].set.contains(z)).collect()
    }

    /// `{y : (x, y) ∈ piece}` for every piece with a nonempty slice.
    pub fn slice(&self, x: &[Q]) -> Vec<PolyhedralSet> {
        self.pieces
            .iter()
            .map(|p| slice_piece(&p.set, self.l, x))
            .filter(|s| !s.is_empty())
            .collect()
    }

    /// Whether `Σ(x)` meets the box of half-width `rho` around `y`.
    pub fn meets_box(&self, x: &[Q], y: &[Q], rho: &Q) -> bool {
        self.slice(x).iter().any(|s| {
            let boxed = s.with_rows(
                &QMatrix::identity(self.k).vstack(&QMatrix::identity(self.k).neg()),
                &y.iter().map(|c| c + rho).chain(y.iter().map(|c| rho - c)).collect::<QVec>(),
            );
            !boxed.is_empty()
        })
    }
}

fn slice_piece(set: &PolyhedralSet, l: usize, x: &[Q]) -> PolyhedralSet {
    let n = set.dim();
    let ay = set.a().column_block(l, n);
    let ax = set.a().column_block(0, l);
    PolyhedralSet::new(ay, sub_vec(set.b(), &ax.mul_vec(x))).expect("consistent rows")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub radius: f64,
    pub kappa: f64,
    /// Number of probes; anchors get [`PROBES_PER_ANCHOR`] probes each.
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Consistent,
    Violated,
}

impl OracleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            OracleVerdict::Consistent => "consistent",
            OracleVerdict::Violated => "violated",
        }
    }
}

/// Anchor `(x, y) ∈ gph Σ` and `y' ∈ Σ(x')` near `y` with
/// `‖y' − y‖ > κ ‖x' − x‖`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadruple {
    pub x: QVec,
    pub y: QVec,
    pub x_prime: QVec,
    pub y_prime: QVec,
}

impl Quadruple {
    pub fn to_json(&self) -> Value {
        json!({
            "x": format_vec(&self.x),
            "y": format_vec(&self.y),
            "x_prime": format_vec(&self.x_prime),
            "y_prime": format_vec(&self.y_prime),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    pub config: OracleConfig,
    pub anchors: usize,
    pub probes: usize,
    /// Largest observed `‖y' − y‖ / ‖x' − x‖` over probes at positive
    /// distance; `None` once a violation at zero distance is found.
    pub modulus: Option<f64>,
    pub quadruple: Option<Quadruple>,
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "rng": RNG_NAME,
            "seed": self.config.seed,
            "samples": self.config.samples,
            "anchors": self.anchors,
            "probes": self.probes,
            "radius": self.config.radius,
            "kappa": self.config.kappa,
            "modulus": self.modulus,
            "quadruple": self.quadruple.as_ref().map(Quadruple::to_json),
        })
    }
}

/// Floating-point suspicion to be settled exactly.
struct Candidate {
    x: QVec,
    y: QVec,
    x_prime: QVec,
    piece: usize,
    coord: usize,
    sign: bool,
}

struct AnchorOutcome {
    modulus: f64,
    candidates: Vec<Candidate>,
}

/// Floating-point copy of a piece split into its `x` and `y` columns.
struct FloatPiece {
    ax: Vec<Vec<f64>>,
    ay: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl FloatPiece {
    fn new(set: &PolyhedralSet, l: usize) -> Self {
        let rows = set.a().rows();
        FloatPiece {
            ax: rows.iter().map(|r| vec_to_f64(&r[..l])).collect(),
            ay: rows.iter().map(|r| vec_to_f64(&r[l..])).collect(),
            b: vec_to_f64(set.b()),
        }
    }

    /// Maximizes `±(y'_i − y_i)` over the slice at `x'` inside the box.
    fn extreme(&self, xp: &[f64], y: &[f64], rho: f64, coord: usize, sign: bool) -> Option<Vec<f64>> {
        let k = y.len();
        let mut lp = LinearProgram::<f64>::new(k);
        for ((ax, ay), b) in self.ax.iter().zip(&self.ay).zip(&self.b) {
            let shift: f64 = ax.iter().zip(xp).map(|(a, x)| a * x).sum();
            lp.le(ay.clone(), b - shift);
        }
        for (i, yi) in y.iter().enumerate() {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            lp.le(e.clone(), yi + rho);
            lp.ge(e, yi - rho);
        }
        let mut obj = vec![0.0; k];
        obj[coord] = if sign { 1.0 } else { -1.0 };
        lp.maximize(obj);
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

fn euclid(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl SolutionGraph {
    /// Point of a piece through the reference, at most `radius` away from it
    /// in the max norm. Anchor 0 is the reference itself.
    fn anchor(&self, index: usize, radius: &Q, rng: &mut ChaCha8Rng) -> QVec {
        let reference = concat(&self.xbar, &self.ybar);
        if index == 0 {
            return reference;
        }
        let piece = &self.pieces[self.at_reference[rng.random_range(0..self.at_reference.len())]];
        let coef = gaussian(rng, piece.directions.len());
        let mut d = vec![Q::zero(); reference.len()];
        for (c, v) in coef.iter().zip(&piece.directions) {
            d = add_vec(&d, &scale_vec(&grid(*c), v));
        }
        let u = grid(rng.random_range(f64::EPSILON..1.0));
        let norm = inf_norm(&d);
        if norm.is_zero() || u.is_zero() {
            return reference;
        }
        let mut t = radius / norm;
        if let Some(limit) = piece.ray_limit(&reference, &d) {
            t = t.min(limit);
        }
        let z = add_vec(&reference, &scale_vec(&(u * t), &d));
        debug_assert!(piece.set.contains(&z));
        z
    }

    fn run_anchor(&self, index: usize, cfg: &OracleConfig, float_pieces: &[FloatPiece], radius: &Q) -> AnchorOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        let z = self.anchor(index, radius, &mut rng);
        let (x, y) = (z[..self.l].to_vec(), z[self.l..].to_vec());
        let local = self.pieces_through(&z);
        let yf = vec_to_f64(&y);
        let rho = cfg.radius * NEIGHBORHOOD_FRACTION;
        let mut out = AnchorOutcome { modulus: 0.0, candidates: Vec::new() };
        for j in 0..PROBES_PER_ANCHOR {
            let x_prime = if j == 0 {
                x.clone()
            } else {
                let r = cfg.radius * 0.5f64.powi(j as i32 - 1);
                let dir = gaussian(&mut rng, self.l);
                let len = euclid(&dir);
                if len == 0.0 {
                    continue;
                }
                x.iter().zip(&dir).map(|(xi, di)| xi + grid(r * di / len)).collect()
            };
            let dx = euclid(&vec_to_f64(&sub_vec(&x_prime, &x)));
            if j > 0 && dx == 0.0 {
                continue;
            }
            let xpf = vec_to_f64(&x_prime);
            'pieces: for &pi in &local {
                for coord in 0..self.k {
                    for sign in [true, false] {
                        let Some(yp) = float_pieces[pi].extreme(&xpf, &yf, rho, coord, sign) else {
                            continue 'pieces;
                        };
                        let diff: Vec<f64> = yp.iter().zip(&yf).map(|(a, b)| a - b).collect();
                        let dy = euclid(&diff);
                        let suspicious = if j == 0 {
                            dy > FLOAT_SLACK
                        } else {
                            let ratio = dy / dx;
                            out.modulus = out.modulus.max(ratio);
                            dy > cfg.kappa * dx + FLOAT_SLACK
                        };
                        if suspicious {
                            out.candidates.push(Candidate {
                                x: x.clone(),
                                y: y.clone(),
                                x_prime: x_prime.clone(),
                                piece: pi,
                                coord,
                                sign,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Re-solves a suspicious probe in exact arithmetic.
    fn confirm(&self, c: &Candidate, rho: &Q, kappa: &Q) -> Option<Quadruple> {
        let slice = slice_piece(&self.pieces[c.piece].set, self.l, &c.x_prime);
        let mut lp = LinearProgram::<Q>::new(self.k);
        for (r, b) in slice.a().rows().iter().zip(slice.b()) {
            lp.le(r.clone(), b.clone());
        }
        for (i, yi) in c.y.iter().enumerate() {
            let e = crate::rational::unit(self.k, i);
            lp.le(e.clone(), yi + rho);
            lp.ge(e, yi - rho);
        }
        let mut obj = crate::rational::zeros(self.k);
        obj[c.coord] = if c.sign { Q::from_integer(1.into()) } else { Q::from_integer((-1).into()) };
        lp.maximize(obj);
        let y_prime = lp.solve().point()?.to_vec();
        let dy = sub_vec(&y_prime, &c.y);
        let dx = sub_vec(&c.x_prime, &c.x);
        let violated = dot(&dy, &dy) > kappa * kappa * dot(&dx, &dx);
        (violated && self.contains(&c.x_prime, &y_prime) && inf_norm(&dy) <= *rho).then(|| Quadruple {
            x: c.x.clone(),
            y: c.y.clone(),
            x_prime: c.x_prime.clone(),
            y_prime,
        })
    }

    /// Seeded search for a violation of isolated calmness with modulus
    /// `kappa` at graph points near the reference.
    ///
    /// Anchors are drawn from the pieces through the reference, within
    /// `radius` in the max norm. The decision neighborhood of an anchor is the
    /// box of half-width `radius / 10` intersected with the pieces through
    /// the anchor; every other piece is closed and misses the anchor, so it
    /// drops out of a small enough neighborhood. Work is spread over the
    /// current rayon pool; each anchor has its own generator stream, so the
    /// result does not depend on the number of threads.
    pub fn verify_isolated_calmness_around(&self, cfg: &OracleConfig) -> Result<OracleReport> {
        if !(cfg.radius > 0.0 && cfg.radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {}", cfg.radius)));
        }
        if !(cfg.kappa > 0.0 && cfg.kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!("kappa must be positive, got {}", cfg.kappa)));
        }
        let anchors = cfg.samples.div_ceil(PROBES_PER_ANCHOR).max(1);
        let float_pieces: Vec<FloatPiece> = self.pieces.iter().map(|p| FloatPiece::new(&p.set, self.l)).collect();
        let radius = grid(cfg.radius);
        let outcomes: Vec<AnchorOutcome> =
            (0..anchors).into_par_iter().map(|i| self.run_anchor(i, cfg, &float_pieces, &radius)).collect();
        let rho = grid(cfg.radius * NEIGHBORHOOD_FRACTION);
        let kappa = crate::rational::from_f64(cfg.kappa);
        let quadruple = outcomes.iter().flat_map(|o| &o.candidates).find_map(|c| self.confirm(c, &rho, &kappa));
        let zero_distance = quadruple.as_ref().is_some_and(|q| q.x == q.x_prime);
        let modulus = outcomes.iter().map(|o| o.modulus).fold(0.0, f64::max);
        Ok(OracleReport {
            verdict: if quadruple.is_some() { OracleVerdict::Violated } else { OracleVerdict::Consistent },
            config: *cfg,
            anchors,
            probes: anchors * PROBES_PER_ANCHOR,
            modulus: (!zero_distance).then_some(modulus),
            quadruple,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemismoothReport {
    pub consistent: bool,
    /// For each tolerance, the first ball radius `2^-j` on which every sample
    /// satisfied the inequality.
    pub radii: Vec<Option<f64>>,
}

/// Halvings of the ball radius tried per tolerance.
const MAX_HALVINGS: i32 = 24;

/// Sanity harness for the semismooth* inequality
/// `|⟨z*, z − z̄⟩| ≤ ε ‖z − z̄‖ ‖z*‖` on a union of polyhedra, with `z`
/// sampled from the pieces through `point` and `z*` a regular normal to the
/// union at `z`. Unions of polyhedra always pass; this is not a decision
/// procedure.
pub fn verify_semismooth_star(
    pieces: &[PolyhedralSet],
    point: &[Q],
    epsilons: &[f64],
    samples: usize,
    seed: u64,
) -> Result<SemismoothReport> {
    let through: Vec<Piece> = pieces
        .iter()
        .filter(|p| p.contains(point))
        .filter_map(|p| Piece::new(p.clone(), Vec::new()))
        .collect();
    if through.is_empty() {
        return Err(Error::NotInSet(format!("{:?} is in no piece", format_vec(point))));
    }
    let mut radii = Vec::new();
    for (e, &eps) in epsilons.iter().enumerate() {
        let mut found = None;
        for j in 0..MAX_HALVINGS {
            let delta = grid(0.5f64.powi(j));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((e as u64) << 32) | j as u64);
            let ok = (0..samples).all(|_| {
                let piece = &through[rng.random_range(0..through.len())];
                let coef = gaussian(&mut rng, piece.directions.len());
                let mut d = vec![Q::zero(); point.len()];
                for (c, v) in coef.iter().zip(&piece.directions) {
                    d = add_vec(&d, &scale_vec(&grid(*c), v));
                }
                let norm = inf_norm(&d);
                if norm.is_zero() {
                    return true;
                }
                let mut t = &delta / norm;
                if let Some(limit) = piece.ray_limit(point, &d) {
                    t = t.min(limit);
                }
                let u = grid(rng.random_range(f64::EPSILON..1.0));
                let z = add_vec(point, &scale_vec(&(u * t), &d));
                let zstar = regular_normal(pieces, &z, &mut rng);
                let offset = sub_vec(&z, point);
                let lhs = to_f64(&dot(&zstar, &offset)).abs();
                let rhs = eps * euclid(&vec_to_f64(&offset)) * euclid(&vec_to_f64(&zstar));
                lhs <= rhs + f64::EPSILON * rhs.max(1.0)
            });
            if ok {
                found = Some(0.5f64.powi(j));
                break;
            }
        }
        radii.push(found);
    }
    Ok(SemismoothReport { consistent: radii.iter().all(Option::is_some), radii })
}

/// Random element of the regular normal cone to the union at `z`: the
/// intersection of the normal cones of the pieces containing `z`.
fn regular_normal(pieces: &[PolyhedralSet], z: &[Q], rng: &mut ChaCha8Rng) -> QVec {
    let n = z.len();
    let mut cone = PolyhedralCone::whole(n);
    for p in pieces.iter().filter(|p| p.contains(z)) {
        cone = cone.intersect(&tangent_cone(p, z).expect("z lies in the piece").polar());
    }
    let g = cone.generators();
    let mut out = vec![Q::zero(); n];
    for r in &g.rays {
        out = add_vec(&out, &scale_vec(&grid(rng.random_range(0.0..1.0)), r));
    }
    for v in &g.lineality {
        out = add_vec(&out, &scale_vec(&grid(rng.sample(StandardNormal)), v));
    }
    out
}
