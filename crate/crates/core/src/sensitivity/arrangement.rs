use std::collections::HashSet;
use std::fmt::Write as _;

use super::edges::{constraint_set, edge_surfaces_in, indifference_between, lp_edges, EdgeId, EdgeSurfaces};
use super::poly::{univariate_eval, Poly};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};

/// Where a stored surface came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    /// `alpha · x*_LP = beta`.
    Separation,
    /// `det(A_{E,alpha}) = 0` for an edge.
    Denominator(EdgeId),
    /// Boundary of the region where the cut meets `edge` before leaving row `row`.
    EdgeBoundary { edge: EdgeId, row: usize },
    /// Equal objective at the cut vertices of two edges.
    Indifference(EdgeId, EdgeId),
    /// Added by callers (integrality levels, incumbent values, validity).
    Extra(String),
}

#[derive(Clone, Debug)]
pub struct Surface {
    pub poly: Poly,
    pub kind: SurfaceKind,
}

/// Deduplicated polynomial surfaces (equal up to a nonzero scalar count once).
#[derive(Clone, Debug)]
pub struct SurfaceStore {
    pub names: Vec<String>,
    pub surfaces: Vec<Surface>,
    seen: HashSet<Poly>,
    /// Number of edge-boundary hyperplanes before deduplication.
    pub hyperplane_count: usize,
    /// Number of indifference surfaces before deduplication.
    pub quadric_count: usize,
    /// `m^n` for the constraint count `m` used.
    pub hyperplane_bound: u128,
    /// `m^(2n)`.
    pub quadric_bound: u128,
}

impl SurfaceStore {
    pub fn new(names: Vec<String>) -> Self {
        SurfaceStore { names, surfaces: Vec::new(), seen: HashSet::new(), hyperplane_count: 0, quadric_count: 0, hyperplane_bound: 0, quadric_bound: 0 }
    }

    /// Variable names `a1, ..., an, b`.
    pub fn for_cut_space(n: usize) -> Self {
        let mut names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
        names.push("b".into());
        SurfaceStore::new(names)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }

    /// Adds `poly` unless it is zero, constant, or a multiple of a stored surface.
    pub fn insert(&mut self, poly: Poly, kind: SurfaceKind) -> bool {
        if poly.degree() == 0 {
            return false;
        }
        let key = poly.normalized();
        if !self.seen.insert(key.clone()) {
            return false;
        }
        self.surfaces.push(Surface { poly: key, kind });
        true
    }

    pub fn contains(&self, poly: &Poly) -> bool {
        self.seen.contains(&poly.normalized())
    }

    pub fn merge(&mut self, other: &SurfaceStore) {
        for s in &other.surfaces {
            self.insert(s.poly.clone(), s.kind.clone());
        }
        self.hyperplane_count += other.hyperplane_count;
        self.quadric_count += other.quadric_count;
    }

    /// Sign of every stored surface at `point`.
    pub fn sign_vector(&self, point: &[Rational]) -> Vec<i8> {
        self.surfaces.iter().map(|s| s.poly.eval(point).signum() as i8).collect()
    }

    /// Whether some surface that is not identically zero on the line
    /// `origin + t·direction` vanishes for some `t` in `[lo, hi]`.
    pub fn has_zero_on_segment(&self, origin: &[Rational], direction: &[Rational], lo: &Rational, hi: &Rational) -> bool {
        self.surfaces.iter().any(|s| {
            let u = s.poly.on_line(origin, direction);
            if u.iter().all(Rational::is_zero) {
                return false;
            }
            let (a, b) = (univariate_eval(&u, lo), univariate_eval(&u, hi));
            a.is_zero() || b.is_zero() || a.signum() != b.signum() || has_root_inside(&u, lo, hi)
        })
    }

    /// One line per surface: `surf deg=<d> <monomial>=<coeff> ...`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for surf in &self.surfaces {
            writeln!(s, "surf deg={} {}", surf.poly.degree(), surf.poly.display_with(&self.names)).unwrap();
        }
        s
    }
}

/// Root of a univariate polynomial strictly inside `(lo, hi)` where the
/// endpoint signs agree (a double root or a pair of roots). Checked through
/// the derivative's roots for polynomials of degree at most 2 and by dense
/// sampling otherwise.
fn has_root_inside(u: &[Rational], lo: &Rational, hi: &Rational) -> bool {
    match u.len() {
        0..=2 => false,
        3 => {
            // vertex of the parabola
            if u[2].is_zero() {
                return false;
            }
            let t = -&u[1] / &(&u[2] * &Rational::from(2));
            if &t <= lo || &t >= hi {
                return false;
            }
            let v = univariate_eval(u, &t);
            let a = univariate_eval(u, lo);
            v.is_zero() || v.signum() != a.signum()
        }
        _ => {
            let steps = 256;
            let a = univariate_eval(u, lo).signum();
            (1..steps).any(|k| {
                let t = lo + &((hi - lo) * Rational::new(k, steps));
                let v = univariate_eval(u, &t).signum();
                v == 0 || v != a
            })
        }
    }
}

/// Default cap on `(n, m)` for [`build_arrangement`].
pub const ARRANGEMENT_MAX_N: usize = 3;
pub const ARRANGEMENT_MAX_M: usize = 12;

/// Separation hyperplane, every edge's denominator and boundary hyperplanes,
/// and the indifference surface of every edge pair. `m` counts every
/// constraint of the polytope, bounds included.
pub fn build_arrangement(lp: &LinearProgram) -> Result<SurfaceStore> {
    let n = lp.n();
    let m = constraint_set(lp);
    if n > ARRANGEMENT_MAX_N || m.len() > ARRANGEMENT_MAX_M {
        return Err(Error::BudgetExceeded(format!("arrangement needs n <= {ARRANGEMENT_MAX_N} and m <= {ARRANGEMENT_MAX_M}, got n = {n}, m = {}", m.len())));
    }
    let mut store = SurfaceStore::for_cut_space(n);
    store.hyperplane_bound = (m.len() as u128).saturating_pow(n as u32);
    store.quadric_bound = (m.len() as u128).saturating_pow(2 * n as u32);
    let x_star = match lp.solve() {
        LpOutcome::Optimal(o) => o.vertex,
        LpOutcome::Infeasible => return Ok(store),
        LpOutcome::Unbounded => return Err(Error::UnboundedRelaxation),
    };
    let mut coeffs = x_star.to_vec();
    coeffs.push(Rational::from(-1));
    store.insert(Poly::linear(&coeffs, Rational::zero()), SurfaceKind::Separation);

    let surfaces: Vec<EdgeSurfaces> = lp_edges(lp).iter().map(|e| edge_surfaces_in(&m, n, e)).collect();
    for s in &surfaces {
        store.insert(s.denominator.clone(), SurfaceKind::Denominator(s.edge.clone()));
        for (row, p) in &s.boundaries {
            store.hyperplane_count += 1;
            store.insert(p.clone(), SurfaceKind::EdgeBoundary { edge: s.edge.clone(), row: *row });
        }
    }
    for (i, p) in surfaces.iter().enumerate() {
        for q in &surfaces[i + 1..] {
            store.quadric_count += 1;
            store.insert(indifference_between(p, q, lp.objective()), SurfaceKind::Indifference(p.edge.clone(), q.edge.clone()));
        }
    }
    Ok(store)
}
