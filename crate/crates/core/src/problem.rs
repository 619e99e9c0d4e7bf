//! Generalized equations `0 ∈ f(x, y) + N_D(g(x, y))` linearized at a
//! reference solution `(x̄, ȳ)`.

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::polyhedra::{active_rows, critical_cone, in_normal_cone, PolyhedralCone, PolyhedralSet};
use crate::rational::{add_vec, format_vec, neg_vec, Q, QVec};

/// Parameter `x ∈ R^l`, decision `y ∈ R^k`, Jacobians `Jf`, `Jg` of size
/// `k × (l + k)` at the reference point, `D ⊂ R^k`.
///
/// Affine problems carry `f0`, `g0` with `f(x, y) = Jf (x, y) + f0` and
/// likewise for `g`; the sampling oracle needs them. Otherwise only the values
/// `f(x̄, ȳ)` and `g(x̄, ȳ)` are known.
#[derive(Clone, Debug, PartialEq)]
pub struct GeProblem {
    l: usize,
    k: usize,
    xbar: QVec,
    ybar: QVec,
    jf: QMatrix,
    jg: QMatrix,
    f0: Option<QVec>,
    g0: Option<QVec>,
    fbar: QVec,
    gbar: QVec,
    d: PolyhedralSet,
}

fn check_len(name: &str, v: &[Q], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{name} has length {}, expected {n}", v.len())));
    }
    Ok(())
}

fn check_shape(name: &str, m: &QMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(Error::Dimension(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

impl GeProblem {
    /// Affine data; the reference values of `f` and `g` are computed.
    #[allow(clippy::too_many_arguments)]
    pub fn affine(
        l: usize,
        k: usize,
        xbar: QVec,
        ybar: QVec,
        jf: QMatrix,
        jg: QMatrix,
        f0: QVec,
        g0: QVec,
        d: PolyhedralSet,
    ) -> Result<Self> {
        check_len("xbar", &xbar, l)?;
        check_len("ybar", &ybar, k)?;
        check_shape("Jf", &jf, k, l + k)?;
        check_shape("Jg", &jg, k, l + k)?;
        check_len("f0", &f0, k)?;
        check_len("g0", &g0, k)?;
        let z: QVec = xbar.iter().chain(&ybar).cloned().collect();
        let fbar = add_vec(&jf.mul_vec(&z), &f0);
        let gbar = add_vec(&jg.mul_vec(&z), &g0);
        let p = GeProblem { l, k, xbar, ybar, jf, jg, f0: Some(f0), g0: Some(g0), fbar, gbar, d };
        p.validate()?;
        Ok(p)
    }

    /// Smooth data known only through Jacobians and values at the reference.
    #[allow(clippy::too_many_arguments)]
    pub fn at_point(
        l: usize,
        k: usize,
        xbar: QVec,
        ybar: QVec,
        jf: QMatrix,
        jg: QMatrix,
        fbar: QVec,
        gbar: QVec,
        d: PolyhedralSet,
    ) -> Result<Self> {
        check_len("xbar", &xbar, l)?;
        check_len("ybar", &ybar, k)?;
        check_shape("Jf", &jf, k, l + k)?;
        check_shape("Jg", &jg, k, l + k)?;
        check_len("f(xbar, ybar)", &fbar, k)?;
        check_len("g(xbar, ybar)", &gbar, k)?;
        let p = GeProblem { l, k, xbar, ybar, jf, jg, f0: None, g0: None, fbar, gbar, d };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.d.dim() != self.k {
            return Err(Error::Dimension(format!("D lives in R^{}, expected R^{}", self.d.dim(), self.k)));
        }
        if !self.d.contains(&self.gbar) {
            return Err(Error::NotASolution(format!(
                "g(xbar, ybar) = {:?} is not in D",
                format_vec(&self.gbar)
            )));
        }
        if !in_normal_cone(&self.d, &self.gbar, &self.dstar())? {
            return Err(Error::NotASolution(format!(
                "-f(xbar, ybar) = {:?} is not normal to D at g(xbar, ybar)",
                format_vec(&self.dstar())
            )));
        }
        Ok(())
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn xbar(&self) -> &QVec {
        &self.xbar
    }

    pub fn ybar(&self) -> &QVec {
        &self.ybar
    }

    pub fn jf(&self) -> &QMatrix {
        &self.jf
    }

    pub fn jg(&self) -> &QMatrix {
        &self.jg
    }

    pub fn f0(&self) -> Option<&QVec> {
        self.f0.as_ref()
    }

    pub fn g0(&self) -> Option<&QVec> {
        self.g0.as_ref()
    }

    pub fn d(&self) -> &PolyhedralSet {
        &self.d
    }

    pub fn fbar(&self) -> &QVec {
        &self.fbar
    }

    pub fn gbar(&self) -> &QVec {
        &self.gbar
    }

    pub fn is_affine(&self) -> bool {
        self.f0.is_some() && self.g0.is_some()
    }

    pub fn fx(&self) -> QMatrix {
        self.jf.column_block(0, self.l)
    }

    pub fn fy(&self) -> QMatrix {
        self.jf.column_block(self.l, self.l + self.k)
    }

    pub fn gx(&self) -> QMatrix {
        self.jg.column_block(0, self.l)
    }

    pub fn gy(&self) -> QMatrix {
        self.jg.column_block(self.l, self.l + self.k)
    }

    /// `d* = −f(x̄, ȳ)`, the normal vector at `g(x̄, ȳ)`.
    pub fn dstar(&self) -> QVec {
        neg_vec(&self.fbar)
    }

    /// `K_D(g(x̄, ȳ), −f(x̄, ȳ))`.
    pub fn critical_cone(&self) -> PolyhedralCone {
        critical_cone(&self.d, &self.gbar, &self.dstar()).expect("validated reference point")
    }

    /// Rows of `D` active at `g(x̄, ȳ)`; face active sets of the critical
    /// cone index into this list.
    pub fn critical_rows(&self) -> Vec<usize> {
        active_rows(&self.d, &self.gbar)
    }

    pub fn jg_full_row_rank(&self) -> bool {
        self.jg.rank() == self.k
    }

    /// Same problem with the parameter enlarged to `(x, p)` and
    /// `g̃((x, p), y) = g(x, y) − p`, so that `∇g̃` always has full row rank.
    /// The reference parameter is `(x̄, 0)`.
    pub fn augmented(&self) -> GeProblem {
        let (l, k) = (self.l, self.k);
        let minus_i = QMatrix::identity(k).neg();
        let zero = QMatrix::zeros(k, k);
        let jg = self.gx().hstack(&minus_i).hstack(&self.gy());
        let jf = self.fx().hstack(&zero).hstack(&self.fy());
        let mut xbar = self.xbar.clone();
        xbar.extend(crate::rational::zeros(k));
        GeProblem {
            l: l + k,
            k,
            xbar,
            ybar: self.ybar.clone(),
            jf,
            jg,
            f0: self.f0.clone(),
            g0: self.g0.clone(),
            fbar: self.fbar.clone(),
            gbar: self.gbar.clone(),
            d: self.d.clone(),
        }
    }

    /// The problem whose calculus is well defined: itself when `∇g` has full
    /// row rank, the augmented problem otherwise.
    pub fn regularized(&self) -> (GeProblem, bool) {
        if self.jg_full_row_rank() {
            (self.clone(), false)
        } else {
            (self.augmented(), true)
        }
    }

    /// `f(x, y)` for affine data.
    pub fn f_at(&self, x: &[Q], y: &[Q]) -> Option<QVec> {
        let f0 = self.f0.as_ref()?;
        let z: QVec = x.iter().chain(y).cloned().collect();
        Some(add_vec(&self.jf.mul_vec(&z), f0))
    }

    /// `g(x, y)` for affine data.
    pub fn g_at(&self, x: &[Q], y: &[Q]) -> Option<QVec> {
        let g0 = self.g0.as_ref()?;
        let z: QVec = x.iter().chain(y).cloned().collect();
        Some(add_vec(&self.jg.mul_vec(&z), g0))
    }

    /// `0 ∈ f(x, y) + N_D(g(x, y))`, decided exactly (affine data only).
    pub fn is_solution(&self, x: &[Q], y: &[Q]) -> Option<bool> {
        let g = self.g_at(x, y)?;
        let f = self.f_at(x, y)?;
        if !self.d.contains(&g) {
            return Some(false);
        }
        Some(in_normal_cone(&self.d, &g, &neg_vec(&f)).unwrap_or(false))
    }
}
