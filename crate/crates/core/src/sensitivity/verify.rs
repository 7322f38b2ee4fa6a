use rand::Rng;

use super::edges::{constraint_set, edge_surfaces_in, lp_edges, EdgeId, EdgeSurfaces};
use crate::arith::{RVector, Rational};
use crate::error::{Error, Result};
use crate::ip::rng::{derive_seed, stream};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Sense};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regime {
    /// The cut does not separate the LP optimum.
    Unchanged,
    /// The new optimum is the cut vertex on this edge.
    ActiveEdge(EdgeId),
    /// The cut removes the whole polytope.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionWitness {
    pub alpha: RVector,
    pub beta: Rational,
    pub regime: Regime,
    pub verified: bool,
}

/// Uniform over `j / 64` for `j` in `[-128, 128]`.
fn dyadic(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-128..=128), 64)
}

/// Closed-form prediction for the cut `alpha · x <= beta`, checked against a
/// fresh simplex solve of the cut LP.
pub struct ClosedFormOracle<'a> {
    lp: &'a LinearProgram,
    x_star: RVector,
    edges: Vec<EdgeSurfaces>,
}

impl<'a> ClosedFormOracle<'a> {
    pub fn new(lp: &'a LinearProgram) -> Result<Self> {
        let x_star = match lp.solve() {
            LpOutcome::Optimal(o) => o.vertex,
            LpOutcome::Infeasible => return Err(Error::InfeasibleRelaxation),
            LpOutcome::Unbounded => return Err(Error::UnboundedRelaxation),
        };
        let m = constraint_set(lp);
        let edges = lp_edges(lp).iter().map(|e| edge_surfaces_in(&m, lp.n(), e)).collect();
        Ok(ClosedFormOracle { lp, x_star, edges })
    }

    pub fn edges(&self) -> &[EdgeSurfaces] {
        &self.edges
    }

    pub fn check(&self, alpha: &RVector, beta: &Rational) -> RegionWitness {
        let resolved = self.lp.add_constraints([Constraint::le(alpha.clone(), beta.clone())]).expect("alpha has length n").solve();
        let witness = |regime, verified| RegionWitness { alpha: alpha.clone(), beta: beta.clone(), regime, verified };
        if alpha.dot(&self.x_star) <= *beta {
            let same = matches!(&resolved, LpOutcome::Optimal(o) if o.vertex == self.x_star);
            return witness(Regime::Unchanged, same);
        }
        let mut point = alpha.to_vec();
        point.push(beta.clone());
        let hit: Vec<&EdgeSurfaces> = self.edges.iter().filter(|e| e.contains(&point)).collect();
        let new_opt = match resolved {
            LpOutcome::Optimal(o) => o.vertex,
            LpOutcome::Infeasible => return witness(Regime::Infeasible, hit.is_empty()),
            LpOutcome::Unbounded => return witness(Regime::Infeasible, false),
        };
        let c = self.lp.objective();
        let vertex_of = |e: &EdgeSurfaces| -> RVector {
            let d = e.denominator.eval(&point);
            e.numerators.iter().map(|nj| nj.eval(&point) / &d).collect()
        };
        let best = hit.iter().map(|e| c.dot(&vertex_of(e))).max();
        match hit.iter().find(|e| vertex_of(e) == new_opt) {
            Some(e) => {
                let top = best.as_ref().is_some_and(|b| *b == c.dot(&new_opt));
                witness(Regime::ActiveEdge(e.edge.clone()), top)
            }
            None => witness(Regime::ActiveEdge(EdgeId(Vec::new())), false),
        }
    }
}

/// Samples `trials` cuts with dyadic coefficients in `[-2, 2]` and checks the
/// closed form against the simplex for each.
pub fn verify_closed_form(lp: &LinearProgram, trials: usize, seed: u64) -> Result<Vec<RegionWitness>> {
    let oracle = ClosedFormOracle::new(lp)?;
    Ok((0..trials)
        .map(|t| {
            let mut rng = stream(derive_seed(seed, t as u64));
            let alpha: RVector = (0..lp.n()).map(|_| dyadic(&mut rng)).collect();
            let beta = dyadic(&mut rng);
            oracle.check(&alpha, &beta)
        })
        .collect())
}

/// Whether `lp` has exactly one optimal solution (checked by optimizing each
/// coordinate in both directions over the optimal face).
pub fn has_unique_optimum(lp: &LinearProgram) -> bool {
    let Some(opt) = lp.solve().optimum().cloned() else { return false };
    let Ok(face) = lp.add_constraints([Constraint::new(lp.objective().clone(), Sense::Ge, opt.value.clone())]) else { return false };
    let n = lp.n();
    (0..n).all(|j| {
        [1, -1].iter().all(|&s| {
            let dir = RVector::unit(n, j).scaled(&Rational::from(s));
            matches!(face.with_objective(dir).expect("length n").solve(), LpOutcome::Optimal(o) if o.value == &opt.vertex[j] * &Rational::from(s))
        })
    })
}

/// A bounded random LP `max c·x, A x <= b, 0 <= x <= u` with integer data and a
/// unique optimum. `A` entries in `[-3, 6]`, `b` in `[1, 20]`, `u` in `[3, 10]`,
/// `c` in `[-3, 6]`; resampled until the optimum is unique.
pub fn random_lp(n: usize, m: usize, seed: u64) -> LinearProgram {
    for attempt in 0u64.. {
        let mut rng = stream(derive_seed(seed, attempt));
        let c: RVector = (0..n).map(|_| Rational::from(rng.gen_range(-3..=6i64))).collect();
        let rows = (0..m)
            .map(|_| {
                let a: RVector = (0..n).map(|_| Rational::from(rng.gen_range(-3..=6i64))).collect();
                Constraint::le(a, Rational::from(rng.gen_range(1..=20i64)))
            })
            .collect();
        let mut lp = LinearProgram::with_rows(c, rows).expect("consistent lengths");
        for j in 0..n {
            lp.set_upper(j, Some(Rational::from(rng.gen_range(3..=10i64))));
        }
        if has_unique_optimum(&lp) {
            return lp;
        }
    }
    unreachable!("attempt counter is unbounded")
}
