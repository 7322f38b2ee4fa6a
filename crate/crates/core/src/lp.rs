//! Linear programs and an exact two-phase primal simplex.
//!
//! All programs are maximizations over `x >= 0`. Per-variable upper bounds are
//! turned into explicit `<=` rows before solving. Pivoting follows Bland's rule
//! (lowest-index entering column, lowest-index leaving variable on ratio ties),
//! which both guarantees termination and makes the solver a deterministic
//! function of its input.

use std::fmt;

use crate::arith::{RMatrix, RVector, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn flipped(self) -> Sense {
        match self {
            Sense::Le => Sense::Ge,
            Sense::Eq => Sense::Eq,
            Sense::Ge => Sense::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Sense::Le => "LE",
            Sense::Eq => "EQ",
            Sense::Ge => "GE",
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A single linear constraint `coeffs · x (sense) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub coeffs: RVector,
    pub sense: Sense,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: RVector, sense: Sense, rhs: Rational) -> Self {
        Constraint { coeffs, sense, rhs }
    }

    pub fn le(coeffs: RVector, rhs: Rational) -> Self {
        Self::new(coeffs, Sense::Le, rhs)
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        self.sense.holds(&self.coeffs.dot(x), &self.rhs)
    }
}

/// `max objective · x` subject to `rows`, `x >= 0`, and optional upper bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    objective: RVector,
    rows: Vec<Constraint>,
    upper: Vec<Option<Rational>>,
}

impl LinearProgram {
    pub fn new(objective: RVector) -> Self {
        let n = objective.len();
        LinearProgram { objective, rows: Vec::new(), upper: vec![None; n] }
    }

    pub fn with_rows(objective: RVector, rows: Vec<Constraint>) -> Result<Self> {
        Self::new(objective).add_constraints(rows)
    }

    pub fn n(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &RVector {
        &self.objective
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn upper_bounds(&self) -> &[Option<Rational>] {
        &self.upper
    }

    pub fn set_upper(&mut self, var: usize, ub: Option<Rational>) {
        self.upper[var] = ub;
    }

    pub fn with_objective(&self, objective: RVector) -> Result<Self> {
        if objective.len() != self.n() {
            return Err(Error::DimensionMismatch(format!("objective of length {} for n = {}", objective.len(), self.n())));
        }
        Ok(LinearProgram { objective, ..self.clone() })
    }

    /// A new program with `extra` rows appended; `self` is left untouched.
    pub fn add_constraints(&self, extra: impl IntoIterator<Item = Constraint>) -> Result<Self> {
        let mut lp = self.clone();
        for row in extra {
            if row.coeffs.len() != lp.n() {
                return Err(Error::DimensionMismatch(format!("row of length {} for n = {}", row.coeffs.len(), lp.n())));
            }
            lp.rows.push(row);
        }
        Ok(lp)
    }

    pub fn is_equality_form(&self) -> bool {
        self.rows.iter().all(|r| r.sense == Sense::Eq) && self.upper.iter().all(Option::is_none)
    }

    /// Whether `x` satisfies every row, nonnegativity, and every upper bound.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.n()
            && x.iter().all(|v| !v.is_negative())
            && self.upper.iter().zip(x).all(|(u, v)| u.as_ref().map_or(true, |u| v <= u))
            && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    /// Rows followed by one `x_j <= u_j` row per finite upper bound.
    pub fn explicit_rows(&self) -> Vec<Constraint> {
        let n = self.n();
        let mut rows = self.rows.clone();
        for (j, u) in self.upper.iter().enumerate() {
            if let Some(u) = u {
                rows.push(Constraint::le(RVector::unit(n, j), u.clone()));
            }
        }
        rows
    }

    pub fn solve(&self) -> LpOutcome {
        solve(self)
    }
}

/// Optimal basic solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub vertex: RVector,
    pub value: Rational,
    /// Basic variable per retained row. Index `j < n` is structural; `n + r` is
    /// the slack or surplus of row `r` (rows numbered as in [`LinearProgram::explicit_rows`]).
    pub basis: Vec<usize>,
    /// The constraint row each basis position belongs to. Rows found redundant
    /// during phase one are dropped and do not appear here.
    pub basis_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimum(&self) -> Option<&LpOptimum> {
        match self {
            LpOutcome::Optimal(o) => Some(o),
            _ => None,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        self.optimum().map(|o| &o.value)
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    row_origin: Vec<usize>,
    /// Reduced costs (objective row), same width as `rows`.
    reduced: Vec<Rational>,
    ncols: usize,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &Rational {
        &self.rows[r][self.ncols]
    }

    fn set_objective(&mut self, cost: &[Rational]) {
        let w = self.ncols + 1;
        let mut d: Vec<Rational> = (0..w).map(|j| if j < self.ncols { cost[j].clone() } else { Rational::zero() }).collect();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_zero() {
                    d[j] -= cb * v;
                }
            }
        }
        self.reduced = d;
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let piv = self.rows[r][q].clone();
        if piv != Rational::one() {
            let inv = piv.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let prow: Vec<(usize, Rational)> = nz.iter().map(|&j| (j, self.rows[r][j].clone())).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][q].is_zero() {
                continue;
            }
            let f = self.rows[i][q].clone();
            let row = &mut self.rows[i];
            for (j, v) in &prow {
                row[*j] -= &f * v;
            }
        }
        if !self.reduced[q].is_zero() {
            let f = self.reduced[q].clone();
            for (j, v) in &prow {
                self.reduced[*j] -= &f * v;
            }
        }
        self.basis[r] = q;
    }

    fn run(&mut self) -> Step {
        loop {
            let Some(q) = (0..self.ncols).find(|&j| self.allowed[j] && self.reduced[j].is_positive()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, q),
                None => return Step::Unbounded,
            }
        }
    }
}

/// Exact optimum of `lp` (maximization).
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.n();
    let rows = lp.explicit_rows();
    let m = rows.len();

    // Column layout: structural [0, n), one slack/surplus per inequality row at
    // n + r, artificials after n + m.
    let mut ncols = n + m;
    let mut art_of_row = vec![None; m];
    for (r, row) in rows.iter().enumerate() {
        let needs_art = match (row.sense, row.rhs.is_negative()) {
            (Sense::Eq, _) => true,
            (Sense::Le, neg) => neg,
            (Sense::Ge, neg) => !neg,
        };
        if needs_art {
            art_of_row[r] = Some(ncols);
            ncols += 1;
        }
    }

    let mut t_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (r, row) in rows.iter().enumerate() {
        let mut v = vec![Rational::zero(); ncols + 1];
        let flip = row.rhs.is_negative();
        for j in 0..n {
            v[j] = if flip { -&row.coeffs[j] } else { row.coeffs[j].clone() };
        }
        match row.sense {
            Sense::Le => v[n + r] = Rational::from(if flip { -1 } else { 1 }),
            Sense::Ge => v[n + r] = Rational::from(if flip { 1 } else { -1 }),
            Sense::Eq => {}
        }
        v[ncols] = row.rhs.abs();
        match art_of_row[r] {
            Some(a) => {
                v[a] = Rational::one();
                basis.push(a);
            }
            None => basis.push(n + r),
        }
        t_rows.push(v);
    }
    let mut allowed = vec![true; ncols];
    for (r, row) in rows.iter().enumerate() {
        if row.sense == Sense::Eq {
            allowed[n + r] = false;
        }
    }
    let mut tab = Tableau { rows: t_rows, basis, row_origin: (0..m).collect(), reduced: Vec::new(), ncols, allowed };

    let has_art = art_of_row.iter().any(Option::is_some);
    if has_art {
        let mut cost = vec![Rational::zero(); ncols];
        for a in art_of_row.iter().flatten() {
            cost[*a] = Rational::from(-1);
        }
        tab.set_objective(&cost);
        // Phase one is bounded above by zero.
        let _ = tab.run();
        let infeasibility: Rational = tab.basis.iter().enumerate().filter(|(_, &b)| b >= n + m).map(|(r, _)| tab.rhs(r).clone()).sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out; rows where that is impossible are redundant.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] >= n + m {
                if let Some(q) = (0..n + m).find(|&j| tab.allowed[j] && !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, q);
                } else {
                    tab.rows.remove(r);
                    tab.basis.remove(r);
                    tab.row_origin.remove(r);
                    continue;
                }
            }
            r += 1;
        }
        for a in n + m..ncols {
            tab.allowed[a] = false;
        }
    }

    let mut cost = vec![Rational::zero(); ncols];
    cost[..n].clone_from_slice(lp.objective());
    tab.set_objective(&cost);
    if let Step::Unbounded = tab.run() {
        return LpOutcome::Unbounded;
    }

    let mut vertex = RVector::zeros(n);
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < n {
            vertex[b] = tab.rhs(r).clone();
        }
    }
    let value = lp.objective().dot(&vertex);
    LpOutcome::Optimal(LpOptimum { vertex, value, basis: tab.basis, basis_rows: tab.row_origin })
}

/// Rows of the basis inverse for every basic variable with a fractional value.
///
/// Each returned vector `u` has one entry per row of `lp`; entries for rows
/// dropped as redundant are zero. Applied to the equality system, `u` yields
/// the simplex tableau row of the corresponding basic variable.
pub fn basis_multipliers(lp: &LinearProgram, opt: &LpOptimum) -> Result<Vec<RVector>> {
    if !lp.is_equality_form() {
        return Err(Error::NotEqualityForm);
    }
    let n = lp.n();
    let k = opt.basis.len();
    if opt.basis.iter().any(|&b| b >= n) {
        return Err(Error::NotEqualityForm);
    }
    let fractional: Vec<usize> = (0..k).filter(|&p| !opt.vertex[opt.basis[p]].is_integer()).collect();
    if fractional.is_empty() {
        return Ok(Vec::new());
    }
    let b_rows: Vec<Vec<Rational>> =
        opt.basis_rows.iter().map(|&r| opt.basis.iter().map(|&j| lp.rows()[r].coeffs[j].clone()).collect()).collect();
    let inv = RMatrix::from_rows(&b_rows)?.inverse()?;
    Ok(fractional
        .into_iter()
        .map(|p| {
            let mut u = RVector::zeros(lp.rows().len());
            for (i, &r) in opt.basis_rows.iter().enumerate() {
                u[r] = inv[(p, i)].clone();
            }
            u
        })
        .collect())
}
