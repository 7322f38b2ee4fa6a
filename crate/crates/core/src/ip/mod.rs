//! Pure-integer programs, the brute-force integer-point oracle, instance
//! generators, and the on-disk instance format.

mod format;
mod generators;
pub mod rng;

pub use format::{parse_instance, serialize_instance};
pub use generators::{
    facility_base, gen_facility, gen_jeroslow, gen_random_ip, gen_random_packing, FacilityData, InstanceDistribution,
};

use crate::arith::{RVector, Rational};
use crate::error::{Error, Result};
use crate::lp::{Constraint, LinearProgram, LpOutcome, Sense};

/// Default cap on the number of box points scanned by [`IPInstance::enumerate_integer_points`].
pub const ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObjSense {
    Max,
    Min,
}

/// `max/min c·x + offset` s.t. integer rows, `0 <= x <= upper`, `x` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IPInstance {
    sense: ObjSense,
    objective: RVector,
    offset: Rational,
    rows: Vec<Constraint>,
    upper: Vec<i64>,
}

impl IPInstance {
    pub fn new(sense: ObjSense, objective: RVector, rows: Vec<Constraint>, upper: Vec<i64>) -> Result<Self> {
        let n = objective.len();
        if upper.len() != n {
            return Err(Error::DimensionMismatch(format!("{} upper bounds for n = {n}", upper.len())));
        }
        if let Some(u) = upper.iter().find(|&&u| u < 0) {
            return Err(Error::InvalidArgument(format!("negative upper bound {u}")));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.coeffs.len() != n {
                return Err(Error::DimensionMismatch(format!("row {i} has {} coefficients for n = {n}", r.coeffs.len())));
            }
            if !r.coeffs.is_integral() || !r.rhs.is_integer() {
                return Err(Error::InvalidArgument(format!("row {i} has non-integer data")));
            }
        }
        Ok(IPInstance { sense, objective, offset: Rational::zero(), rows, upper })
    }

    /// Binary variables, no rows.
    pub fn binary(sense: ObjSense, objective: RVector, rows: Vec<Constraint>) -> Result<Self> {
        let n = objective.len();
        Self::new(sense, objective, rows, vec![1; n])
    }

    pub fn with_offset(mut self, offset: Rational) -> Self {
        self.offset = offset;
        self
    }

    pub fn n(&self) -> usize {
        self.objective.len()
    }

    pub fn sense(&self) -> ObjSense {
        self.sense
    }

    pub fn objective(&self) -> &RVector {
        &self.objective
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    /// Objective in maximization form (negated for minimization instances).
    pub fn max_objective(&self) -> RVector {
        match self.sense {
            ObjSense::Max => self.objective.clone(),
            ObjSense::Min => self.objective.iter().map(|v| -v).collect(),
        }
    }

    /// Objective value of `x` in the instance's own sense, offset included.
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.objective.dot(x) + &self.offset
    }

    /// Whether `x <= u` for variable `j` is already implied by a single row
    /// with nonnegative coefficients.
    fn bound_implied(&self, j: usize) -> bool {
        let u = Rational::from(self.upper[j]);
        self.rows.iter().any(|r| {
            r.sense != Sense::Ge
                && r.coeffs[j].is_positive()
                && r.coeffs.iter().all(|a| !a.is_negative())
                && &r.rhs / &r.coeffs[j] <= u
        })
    }

    /// Upper-bound rows `x_j <= u_j` that are not implied by a structural row.
    pub fn bound_rows(&self) -> Vec<Constraint> {
        let n = self.n();
        (0..n)
            .filter(|&j| !self.bound_implied(j))
            .map(|j| Constraint::le(RVector::unit(n, j), Rational::from(self.upper[j])))
            .collect()
    }

    /// Same instance with the non-implied upper bounds also present as rows.
    pub fn with_bound_rows(&self) -> IPInstance {
        let mut ip = self.clone();
        ip.rows.extend(self.bound_rows());
        ip
    }

    /// The LP relaxation in maximization form. Upper bounds that are implied by
    /// a structural row are left out; the polytope is unchanged.
    pub fn relaxation(&self) -> LinearProgram {
        let mut rows = self.rows.clone();
        rows.extend(self.bound_rows());
        LinearProgram::with_rows(self.max_objective(), rows).expect("rows validated at construction")
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.n()
            && x.iter().zip(&self.upper).all(|(v, &u)| v.is_integer() && !v.is_negative() && *v <= Rational::from(u))
            && self.rows.iter().all(|r| r.satisfied_by(x))
    }

    /// `ceil(max_i max{x_i : x in P})`, by one LP per coordinate.
    pub fn tau_bound(&self) -> Result<i64> {
        let lp = self.relaxation();
        let n = self.n();
        let mut tau = Rational::zero();
        for i in 0..n {
            match lp.with_objective(RVector::unit(n, i))?.solve() {
                LpOutcome::Optimal(o) => tau = tau.max(o.value),
                LpOutcome::Infeasible => return Ok(0),
                LpOutcome::Unbounded => return Err(Error::UnboundedRelaxation),
            }
        }
        tau.ceil().to_i64().ok_or_else(|| Error::BudgetExceeded("tau does not fit in i64".into()))
    }

    pub fn enumerate_integer_points(&self) -> Result<Vec<RVector>> {
        self.enumerate_integer_points_capped(ENUMERATION_CAP)
    }

    /// Every integer point of the relaxation, found by scanning `[0, min(tau, u_j)]`
    /// per coordinate in lexicographic order.
    pub fn enumerate_integer_points_capped(&self, cap: u128) -> Result<Vec<RVector>> {
        let tau = self.tau_bound()?;
        let n = self.n();
        let hi: Vec<i64> = self.upper.iter().map(|&u| u.min(tau)).collect();
        let points = hi.iter().try_fold(1u128, |acc, &h| acc.checked_mul(h as u128 + 1)).unwrap_or(u128::MAX);
        if points > cap {
            return Err(Error::TooLarge { points, cap });
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        loop {
            let x: Vec<Rational> = cur.iter().map(|&v| Rational::from(v)).collect();
            if self.rows.iter().all(|r| r.satisfied_by(&x)) {
                out.push(RVector::new(x));
            }
            // odometer, last coordinate fastest
            let mut k = n;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
    }
}
