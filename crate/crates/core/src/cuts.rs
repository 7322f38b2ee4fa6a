//! Cutting planes: Gomory mixed-integer (single and sequential), Chvátal–Gomory,
//! brute-force validity, and the parallelism/efficacy scores used to pick root cuts.
//!
//! Cuts are generated against an [`EqualityForm`] (every inequality row given a
//! nonnegative integer slack) and then returned in the original variable space
//! by substituting each slack with its defining expression.

use std::fmt;
use std::str::FromStr;

use crate::arith::{RVector, Rational};
use crate::error::{Error, Result};
use crate::ip::IPInstance;
use crate::lp::{basis_multipliers, Constraint, LinearProgram, LpOutcome, Sense};

/// `alpha · x <= beta` in original variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutPlane {
    pub alpha: RVector,
    pub beta: Rational,
}

impl CutPlane {
    pub fn new(alpha: RVector, beta: Rational) -> Self {
        CutPlane { alpha, beta }
    }

    /// The tautology `0 <= 0`.
    pub fn trivial(n: usize) -> Self {
        CutPlane { alpha: RVector::zeros(n), beta: Rational::zero() }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// `alpha · x - beta`; positive means `x` is cut off.
    pub fn violation(&self, x: &[Rational]) -> Rational {
        self.alpha.dot(x) - &self.beta
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        !self.violation(x).is_positive()
    }

    pub fn to_constraint(&self) -> Constraint {
        Constraint::le(self.alpha.clone(), self.beta.clone())
    }
}

impl fmt::Display for CutPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("cut")?;
        for a in self.alpha.iter() {
            write!(f, " {a}")?;
        }
        write!(f, " <= {}", self.beta)
    }
}

impl FromStr for CutPlane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 0, msg: format!("{msg}: {s:?}") };
        let t: Vec<&str> = s.split_whitespace().collect();
        if t.len() < 3 || t[0] != "cut" || t[t.len() - 2] != "<=" {
            return Err(bad("expected \"cut <alpha...> <= <beta>\""));
        }
        let alpha = t[1..t.len() - 2].iter().map(|v| v.parse::<Rational>().map_err(|_| bad("bad coefficient"))).collect::<Result<RVector>>()?;
        let beta = t[t.len() - 1].parse().map_err(|_| bad("bad right-hand side"))?;
        Ok(CutPlane { alpha, beta })
    }
}

/// Parses one cut per non-empty, non-`#` line.
pub fn parse_cuts(text: &str) -> Result<Vec<CutPlane>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.parse::<CutPlane>().map_err(|e| match e {
                Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
                other => other,
            })
        })
        .collect()
}

/// Multiplier vector over the rows of an equality-form system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GmiParams(pub RVector);

impl From<RVector> for GmiParams {
    fn from(u: RVector) -> Self {
        GmiParams(u)
    }
}

/// Slack introduced for one inequality row: `s = sign · (rhs - coeffs · x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackDef {
    pub var: usize,
    pub row: usize,
    /// `+1` for `<=` rows, `-1` for `>=` rows.
    pub sign: i64,
}

/// An IP whose rows are all equalities, plus the slack bookkeeping needed to
/// map extended-space inequalities back to the original variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityForm {
    pub ip: IPInstance,
    pub original_n: usize,
    /// Original rows (before slacks were added).
    pub original_rows: Vec<Constraint>,
    pub slacks: Vec<SlackDef>,
}

impl EqualityForm {
    pub fn m(&self) -> usize {
        self.ip.rows().len()
    }

    /// Column `i` of the equality constraint matrix.
    pub fn column(&self, i: usize) -> RVector {
        self.ip.rows().iter().map(|r| r.coeffs[i].clone()).collect()
    }

    pub fn rhs(&self) -> RVector {
        self.ip.rows().iter().map(|r| r.rhs.clone()).collect()
    }

    /// `x` extended with the slack values it induces.
    pub fn extend_point(&self, x: &[Rational]) -> RVector {
        let mut z: Vec<Rational> = x.to_vec();
        z.resize(self.ip.n(), Rational::zero());
        for s in &self.slacks {
            let r = &self.original_rows[s.row];
            z[s.var] = (&r.rhs - &r.coeffs.dot(x)) * Rational::from(s.sign);
        }
        RVector::new(z)
    }

    /// Turns `coeffs · z <= rhs` over extended variables into a cut in the
    /// original variables.
    pub fn project(&self, coeffs: &[Rational], rhs: &Rational) -> CutPlane {
        let n = self.original_n;
        let mut alpha: RVector = coeffs[..n].iter().cloned().collect();
        let mut beta = rhs.clone();
        for s in &self.slacks {
            let g = &coeffs[s.var];
            if g.is_zero() {
                continue;
            }
            let gs = g * &Rational::from(s.sign);
            let r = &self.original_rows[s.row];
            for j in 0..n {
                if !r.coeffs[j].is_zero() {
                    alpha[j] -= &gs * &r.coeffs[j];
                }
            }
            beta -= &gs * &r.rhs;
        }
        CutPlane { alpha, beta }
    }

    /// The equality system as an LP with no upper bounds (maximizing the
    /// instance objective, zero on slacks).
    pub fn lp(&self) -> LinearProgram {
        LinearProgram::with_rows(self.ip.max_objective(), self.ip.rows().to_vec()).expect("validated rows")
    }
}

/// Adds a nonnegative integer slack (coefficient `+1` for `<=`, `-1` for `>=`)
/// to each inequality row. Equality rows are left as they are.
pub fn to_equality_form(ip: &IPInstance) -> EqualityForm {
    let n = ip.n();
    let ineq: Vec<usize> = (0..ip.rows().len()).filter(|&r| ip.rows()[r].sense != Sense::Eq).collect();
    let total = n + ineq.len();
    let mut slacks = Vec::with_capacity(ineq.len());
    let mut upper = ip.upper().to_vec();
    let mut objective: Vec<Rational> = ip.objective().to_vec();
    objective.resize(total, Rational::zero());
    for (k, &r) in ineq.iter().enumerate() {
        let row = &ip.rows()[r];
        let sign = if row.sense == Sense::Le { 1 } else { -1 };
        // Largest slack value over the variable box.
        let extreme: Rational = row
            .coeffs
            .iter()
            .zip(ip.upper())
            .map(|(a, &u)| if (a.is_negative() && sign == 1) || (a.is_positive() && sign == -1) { a.abs() * Rational::from(u) } else { Rational::zero() })
            .sum();
        let ub = (extreme + &row.rhs * &Rational::from(sign)).max(Rational::zero());
        upper.push(ub.to_i64().unwrap_or(i64::MAX));
        slacks.push(SlackDef { var: n + k, row: r, sign });
    }
    let rows = ip
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut coeffs: Vec<Rational> = row.coeffs.to_vec();
            coeffs.resize(total, Rational::zero());
            if let Some(s) = slacks.iter().find(|s| s.row == r) {
                coeffs[s.var] = Rational::from(s.sign);
            }
            Constraint::new(RVector::new(coeffs), Sense::Eq, row.rhs.clone())
        })
        .collect();
    let eq = IPInstance::new(ip.sense(), RVector::new(objective), rows, upper).expect("integral slacks").with_offset(ip.offset().clone());
    EqualityForm { ip: eq, original_n: n, original_rows: ip.rows().to_vec(), slacks }
}

/// GMI coefficients in extended space for the aggregated row `agg · z = agg_rhs`:
/// returns `(g, f0)` for the inequality `g · z >= f0`.
pub fn gmi_extended(agg: &[Rational], agg_rhs: &Rational) -> Result<(RVector, Rational)> {
    let f0 = agg_rhs.fract();
    if f0.is_zero() {
        return Err(Error::DegenerateCut { index: None });
    }
    let one = Rational::one();
    let ratio = &f0 / &(&one - &f0);
    let g = agg
        .iter()
        .map(|a| {
            let fi = a.fract();
            if fi <= f0 {
                fi
            } else {
                &ratio * &(&one - &fi)
            }
        })
        .collect();
    Ok((g, f0))
}

fn aggregate(rows: &[Vec<Rational>], rhs: &[Rational], u: &[Rational]) -> (Vec<Rational>, Rational) {
    let width = rows.first().map_or(0, Vec::len);
    let mut agg = vec![Rational::zero(); width];
    let mut b = Rational::zero();
    for ((row, r), ui) in rows.iter().zip(rhs).zip(u) {
        if ui.is_zero() {
            continue;
        }
        for (a, v) in agg.iter_mut().zip(row) {
            if !v.is_zero() {
                *a += ui * v;
            }
        }
        b += ui * r;
    }
    (agg, b)
}

fn system(eq: &EqualityForm) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    (eq.ip.rows().iter().map(|r| r.coeffs.to_vec()).collect(), eq.ip.rows().iter().map(|r| r.rhs.clone()).collect())
}

fn gmi_from_aggregate(eq: &EqualityForm, agg: &[Rational], agg_rhs: &Rational) -> Result<CutPlane> {
    let (g, f0) = gmi_extended(agg, agg_rhs)?;
    // g·z >= f0  <=>  -g·z <= -f0
    let neg: Vec<Rational> = g.iter().map(|v| -v).collect();
    Ok(eq.project(&neg, &-f0))
}

/// The GMI cut of multiplier `u` against the equality system.
pub fn gmi_cut(eq: &EqualityForm, u: &GmiParams) -> Result<CutPlane> {
    if u.0.len() != eq.m() {
        return Err(Error::DimensionMismatch(format!("u has length {}, system has {} rows", u.0.len(), eq.m())));
    }
    let (rows, rhs) = system(eq);
    let (agg, b) = aggregate(&rows, &rhs, &u.0);
    gmi_from_aggregate(eq, &agg, &b)
}

/// `K` GMI cuts applied in sequence. Multiplier `k` (0-based) has length `m + k`:
/// before cut `k + 1`, the system is augmented with the aggregated row
/// `u_k^T [A; ...]` and right-hand side `u_k^T [b; ...]`.
pub fn sequential_gmi(eq: &EqualityForm, us: &[GmiParams]) -> Result<Vec<CutPlane>> {
    if us.is_empty() {
        return Err(Error::DimensionMismatch("need at least one multiplier".into()));
    }
    let (mut rows, mut rhs) = system(eq);
    let mut cuts = Vec::with_capacity(us.len());
    for (k, u) in us.iter().enumerate() {
        if u.0.len() != eq.m() + k {
            return Err(Error::DimensionMismatch(format!("multiplier {k} has length {}, expected {}", u.0.len(), eq.m() + k)));
        }
        let (agg, b) = aggregate(&rows, &rhs, &u.0);
        let cut = gmi_from_aggregate(eq, &agg, &b).map_err(|e| match e {
            Error::DegenerateCut { .. } => Error::DegenerateCut { index: Some(k) },
            other => other,
        })?;
        cuts.push(cut);
        rows.push(agg);
        rhs.push(b);
    }
    Ok(cuts)
}

/// Chvátal–Gomory cut `floor(u^T A) z <= floor(u^T b)` in original variables.
/// Valid for every `u` on an equality system over nonnegative integers.
pub fn cg_cut(eq: &EqualityForm, u: &RVector) -> Result<CutPlane> {
    if u.len() != eq.m() {
        return Err(Error::DimensionMismatch(format!("u has length {}, system has {} rows", u.len(), eq.m())));
    }
    let (rows, rhs) = system(eq);
    let (agg, b) = aggregate(&rows, &rhs, u);
    let floors: Vec<Rational> = agg.iter().map(Rational::floor).collect();
    Ok(eq.project(&floors, &b.floor()))
}

/// Whether `cut` holds at every point in `points`.
pub fn is_valid_on(points: &[RVector], cut: &CutPlane) -> bool {
    points.iter().all(|x| cut.is_satisfied_by(x))
}

/// Whether `cut` is satisfied by every integer-feasible point of `ip`.
pub fn is_valid_cut(ip: &IPInstance, cut: &CutPlane) -> Result<bool> {
    Ok(is_valid_on(&ip.enumerate_integer_points()?, cut))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredCut {
    pub cut: CutPlane,
    pub parallelism: f64,
    pub efficacy: f64,
}

/// Parallelism `|c·α| / (‖c‖ ‖α‖)` and efficacy `(α·x_lp − β) / ‖α‖` of each cut.
pub fn score_cuts(pool: &[CutPlane], c: &RVector, x_lp: &RVector) -> Vec<ScoredCut> {
    let cn = c.norm2_f64();
    pool.iter()
        .map(|cut| {
            let an = cut.alpha.norm2_f64();
            let parallelism = if cn == 0.0 || an == 0.0 { 0.0 } else { (cut.alpha.dot(c).to_f64().abs() / (cn * an)).min(1.0) };
            let efficacy = if an == 0.0 { 0.0 } else { cut.violation(x_lp).to_f64() / an };
            ScoredCut { cut: cut.clone(), parallelism, efficacy }
        })
        .collect()
}

/// Pool indices of the top `k` cuts by `mu·parallelism + (1 − mu)·efficacy`,
/// ties broken by lower pool index.
pub fn select_cut_indices(scored: &[ScoredCut], mu: f64, k: usize) -> Vec<usize> {
    let mut order: Vec<(usize, f64)> =
        scored.iter().enumerate().map(|(i, s)| (i, mu * s.parallelism + (1.0 - mu) * s.efficacy)).collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.into_iter().take(k).map(|(i, _)| i).collect()
}

pub fn select_cuts(scored: &[ScoredCut], mu: f64, k: usize) -> Vec<CutPlane> {
    select_cut_indices(scored, mu, k).into_iter().map(|i| scored[i].cut.clone()).collect()
}

/// Candidate root cuts of an IP: one CG and one GMI cut per fractional basic
/// variable of the optimal simplex basis of the relaxation (bounds included as
/// rows), deduplicated, together with the relaxation optimum they separate.
#[derive(Clone, Debug)]
pub struct RootPool {
    pub cuts: Vec<CutPlane>,
    pub x_lp: Option<RVector>,
    /// Objective in maximization form, used for parallelism.
    pub objective: RVector,
}

pub fn root_cut_pool(ip: &IPInstance) -> Result<RootPool> {
    let eq = to_equality_form(&ip.with_bound_rows());
    let lp = eq.lp();
    let objective = ip.max_objective();
    let opt = match lp.solve() {
        LpOutcome::Optimal(o) => o,
        LpOutcome::Infeasible => return Ok(RootPool { cuts: Vec::new(), x_lp: None, objective }),
        LpOutcome::Unbounded => return Err(Error::UnboundedRelaxation),
    };
    let x_lp: RVector = opt.vertex[..ip.n()].iter().cloned().collect();
    let mut cuts: Vec<CutPlane> = Vec::new();
    for u in basis_multipliers(&lp, &opt)? {
        let mut push = |c: CutPlane| {
            if !cuts.contains(&c) {
                cuts.push(c);
            }
        };
        push(cg_cut(&eq, &u)?);
        match gmi_cut(&eq, &GmiParams(u)) {
            Ok(c) => push(c),
            Err(Error::DegenerateCut { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(RootPool { cuts, x_lp: Some(x_lp), objective })
}
