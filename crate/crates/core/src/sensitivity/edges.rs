use std::fmt;

use itertools::Itertools;

use super::poly::Poly;
use crate::arith::{RMatrix, RVector, Rational};
use crate::error::{Error, Result};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Sense};

/// One constraint of the polytope written as `coeffs · x <= rhs`, or as an
/// equation when `equality` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MRow {
    pub coeffs: RVector,
    pub rhs: Rational,
    pub equality: bool,
}

/// Constraints defining the feasible region: structural rows (`>=` rows
/// negated), then `-x_j <= 0` for every variable, then finite upper bounds.
pub fn constraint_set(lp: &LinearProgram) -> Vec<MRow> {
    let n = lp.n();
    let mut out: Vec<MRow> = lp
        .rows()
        .iter()
        .map(|r| match r.sense {
            Sense::Le => MRow { coeffs: r.coeffs.clone(), rhs: r.rhs.clone(), equality: false },
            Sense::Ge => MRow { coeffs: r.coeffs.scaled(&Rational::from(-1)), rhs: -&r.rhs, equality: false },
            Sense::Eq => MRow { coeffs: r.coeffs.clone(), rhs: r.rhs.clone(), equality: true },
        })
        .collect();
    for j in 0..n {
        out.push(MRow { coeffs: RVector::unit(n, j).scaled(&Rational::from(-1)), rhs: Rational::zero(), equality: false });
    }
    for (j, u) in lp.upper_bounds().iter().enumerate() {
        if let Some(u) = u {
            out.push(MRow { coeffs: RVector::unit(n, j), rhs: u.clone(), equality: false });
        }
    }
    out
}

/// An edge of the polytope, named by `n - 1` constraint indices (into
/// [`constraint_set`]) that are tight along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub Vec<usize>);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Generalized cross product of `n - 1` rows in `R^n`: a nonzero vector
/// orthogonal to all of them exactly when they are linearly independent.
fn null_direction(rows: &[&RVector], n: usize) -> RVector {
    (0..n)
        .map(|i| {
            let minor: Vec<Vec<Rational>> =
                rows.iter().map(|r| (0..n).filter(|&j| j != i).map(|j| r[j].clone()).collect()).collect();
            let d = if minor.is_empty() { Rational::one() } else { RMatrix::from_rows(&minor).and_then(|m| m.det()).expect("square minor") };
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

/// Every index set `E` with rank `n - 1` whose line meets the polytope in a
/// segment of positive length. Equality rows belong to every `E`.
pub fn lp_edges(lp: &LinearProgram) -> Vec<EdgeId> {
    let n = lp.n();
    let m = constraint_set(lp);
    let eq: Vec<usize> = (0..m.len()).filter(|&i| m[i].equality).collect();
    if n < 2 || eq.len() > n - 1 {
        return Vec::new();
    }
    let free: Vec<usize> = (0..m.len()).filter(|&i| !m[i].equality).collect();
    let mut out = Vec::new();
    for pick in free.iter().copied().combinations(n - 1 - eq.len()) {
        let mut e: Vec<usize> = eq.iter().copied().chain(pick).collect();
        e.sort_unstable();
        let rows: Vec<&RVector> = e.iter().map(|&i| &m[i].coeffs).collect();
        let d = null_direction(&rows, n);
        if d.is_zero() {
            continue;
        }
        let on_line = e.iter().map(|&i| Constraint::new(m[i].coeffs.clone(), Sense::Eq, m[i].rhs.clone()));
        let Ok(restricted) = lp.add_constraints(on_line) else { continue };
        let hi = restricted.with_objective(d.clone()).expect("length n").solve();
        let lo = restricted.with_objective(d.scaled(&Rational::from(-1))).expect("length n").solve();
        let positive = match (&hi, &lo) {
            (LpOutcome::Optimal(a), LpOutcome::Optimal(b)) => (&a.value + &b.value).is_positive(),
            (LpOutcome::Unbounded, _) | (_, LpOutcome::Unbounded) => true,
            _ => false,
        };
        if positive {
            out.push(EdgeId(e));
        }
    }
    out
}

fn augmented(m: &[MRow], e: &EdgeId, alpha: &[Rational], beta: &Rational) -> (RMatrix, RVector) {
    let mut rows: Vec<Vec<Rational>> = e.0.iter().map(|&i| m[i].coeffs.to_vec()).collect();
    rows.push(alpha.to_vec());
    let mut rhs: Vec<Rational> = e.0.iter().map(|&i| m[i].rhs.clone()).collect();
    rhs.push(beta.clone());
    (RMatrix::from_rows(&rows).expect("rectangular"), RVector::new(rhs))
}

/// Intersection of the cut hyperplane `alpha · x = beta` with the line of edge `e`.
pub fn closed_form(lp: &LinearProgram, e: &EdgeId, alpha: &[Rational], beta: &Rational) -> Result<RVector> {
    if alpha.len() != lp.n() {
        return Err(Error::DimensionMismatch(format!("alpha has length {}, n = {}", alpha.len(), lp.n())));
    }
    let (a, b) = augmented(&constraint_set(lp), e, alpha, beta);
    a.cramer_solve(&b).map_err(|_| Error::SingularAugmentedSystem)
}

/// Determinant of `[fixed; last]` where only the last row is symbolic,
/// expanded along that row.
fn det_last_row(fixed: &[Vec<Rational>], last: &[Poly], nvars: usize) -> Poly {
    let n = last.len();
    let mut out = Poly::zero(nvars);
    for k in 0..n {
        let minor: Vec<Vec<Rational>> = fixed.iter().map(|r| (0..n).filter(|&j| j != k).map(|j| r[j].clone()).collect()).collect();
        let cof = if minor.is_empty() { Rational::one() } else { RMatrix::from_rows(&minor).and_then(|m| m.det()).expect("square minor") };
        if cof.is_zero() {
            continue;
        }
        let sign = if (n - 1 + k) % 2 == 0 { cof } else { -cof };
        out = &out + &last[k].scale(&sign);
    }
    out
}

/// Symbolic Cramer data of one edge over the variables `(a_1, ..., a_n, b)`:
/// `x_j = numerators[j] / denominator`, and for each constraint `i` outside
/// the edge, `boundaries[i] = rhs_i·D − Σ_j a_ij N_j`. The cut meets the edge
/// exactly when `D ≠ 0` and `boundaries[i] · D >= 0` for every `i`.
#[derive(Clone, Debug)]
pub struct EdgeSurfaces {
    pub edge: EdgeId,
    pub denominator: Poly,
    pub numerators: Vec<Poly>,
    pub boundaries: Vec<(usize, Poly)>,
}

impl EdgeSurfaces {
    pub fn contains(&self, point: &[Rational]) -> bool {
        let d = self.denominator.eval(point);
        !d.is_zero() && self.boundaries.iter().all(|(_, p)| !(p.eval(point) * &d).is_negative())
    }

    /// Objective at the closed-form vertex times the denominator.
    pub fn scaled_objective(&self, c: &[Rational]) -> Poly {
        let nv = self.denominator.nvars();
        self.numerators.iter().zip(c).fold(Poly::zero(nv), |acc, (nj, cj)| &acc + &nj.scale(cj))
    }
}

pub fn edge_surfaces(lp: &LinearProgram, e: &EdgeId) -> EdgeSurfaces {
    edge_surfaces_in(&constraint_set(lp), lp.n(), e)
}

pub(crate) fn edge_surfaces_in(m: &[MRow], n: usize, e: &EdgeId) -> EdgeSurfaces {
    let nv = n + 1;
    let alpha: Vec<Poly> = (0..n).map(|j| Poly::var(nv, j)).collect();
    let beta = Poly::var(nv, n);
    let fixed: Vec<Vec<Rational>> = e.0.iter().map(|&i| m[i].coeffs.to_vec()).collect();
    let denominator = det_last_row(&fixed, &alpha, nv);
    let numerators: Vec<Poly> = (0..n)
        .map(|j| {
            let mut f = fixed.clone();
            for (row, &i) in f.iter_mut().zip(&e.0) {
                row[j] = m[i].rhs.clone();
            }
            let mut last = alpha.clone();
            last[j] = beta.clone();
            det_last_row(&f, &last, nv)
        })
        .collect();
    let boundaries = (0..m.len())
        .filter(|i| !e.0.contains(i))
        .map(|i| {
            let lhs = numerators.iter().zip(m[i].coeffs.iter()).fold(Poly::zero(nv), |acc, (nj, a)| &acc + &nj.scale(a));
            (i, &denominator.scale(&m[i].rhs) - &lhs)
        })
        .collect();
    EdgeSurfaces { edge: e.clone(), denominator, numerators, boundaries }
}

/// Boundary hyperplanes of the region where the cut hits edge `e`, one per
/// constraint outside `e`, plus the denominator whose sign fixes each side.
pub fn edge_hit_halfspaces(lp: &LinearProgram, e: &EdgeId) -> EdgeSurfaces {
    edge_surfaces(lp, e)
}

/// `Σ c_i N^p_i D^q − Σ c_i N^q_i D^p`: zero where the cut vertices on the two
/// edges have equal objective.
pub fn indifference_poly(lp: &LinearProgram, ep: &EdgeId, eq: &EdgeId) -> Result<Poly> {
    if ep == eq {
        return Err(Error::InvalidArgument("indifference surface needs two distinct edges".into()));
    }
    let m = constraint_set(lp);
    let p = edge_surfaces_in(&m, lp.n(), ep);
    let q = edge_surfaces_in(&m, lp.n(), eq);
    Ok(indifference_between(&p, &q, lp.objective()))
}

pub(crate) fn indifference_between(p: &EdgeSurfaces, q: &EdgeSurfaces, c: &[Rational]) -> Poly {
    &(&p.scaled_objective(c) * &q.denominator) - &(&q.scaled_objective(c) * &p.denominator)
}
