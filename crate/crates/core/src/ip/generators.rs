//! Instance generators. All are pure functions of their parameters and seed.

use rand::Rng;

use super::rng::{derive_seed, quantize, stream, Gaussian};
use super::{IPInstance, ObjSense};
use crate::arith::{RVector, Rational};
use crate::error::{Error, Result};
use crate::lp::{Constraint, Sense};

/// Raw data of a capacitated facility location instance.
///
/// Variables are ordered `x_0..x_{|J|-1}` (open location `j`) followed by
/// `y_{c,j}` in client-major order, index `|J| + c·|J| + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacilityData {
    pub fixed: Vec<Rational>,
    /// `service[c][j]`: cost of serving client `c` from location `j`.
    pub service: Vec<Vec<Rational>>,
    pub capacity: Vec<i64>,
}

impl FacilityData {
    pub fn locations(&self) -> usize {
        self.fixed.len()
    }

    pub fn clients(&self) -> usize {
        self.service.len()
    }

    pub fn y_index(&self, c: usize, j: usize) -> usize {
        self.locations() + c * self.locations() + j
    }

    /// The 0/1 minimization IP: every client assigned once, location `j`
    /// serves at most `capacity[j]` clients and only if opened.
    pub fn to_ip(&self) -> IPInstance {
        let nj = self.locations();
        let nc = self.clients();
        let n = nj + nj * nc;
        let mut obj = RVector::zeros(n);
        for j in 0..nj {
            obj[j] = self.fixed[j].clone();
        }
        for c in 0..nc {
            for j in 0..nj {
                obj[self.y_index(c, j)] = self.service[c][j].clone();
            }
        }
        let mut rows = Vec::with_capacity(nj + nc);
        for c in 0..nc {
            let mut a = RVector::zeros(n);
            for j in 0..nj {
                a[self.y_index(c, j)] = Rational::one();
            }
            rows.push(Constraint::new(a, Sense::Eq, Rational::one()));
        }
        for j in 0..nj {
            let mut a = RVector::zeros(n);
            for c in 0..nc {
                a[self.y_index(c, j)] = Rational::one();
            }
            a[j] = Rational::from(-self.capacity[j]);
            rows.push(Constraint::le(a, Rational::zero()));
        }
        IPInstance::binary(ObjSense::Min, obj, rows).expect("facility rows are integral")
    }
}

/// Base instance for the perturbation distribution: location and service costs
/// uniform on `[0, cost_max]`, capacities uniform on `{0, ..., capacity_max}`.
pub fn facility_base(locations: usize, clients: usize, cost_max: f64, capacity_max: i64, seed: u64) -> FacilityData {
    let mut rng = stream(seed);
    let fixed = (0..locations).map(|_| quantize(rng.gen_range(0.0..=cost_max))).collect();
    let service = (0..clients).map(|_| (0..locations).map(|_| quantize(rng.gen_range(0.0..=cost_max))).collect()).collect();
    let capacity = (0..locations).map(|_| rng.gen_range(0..=capacity_max)).collect();
    FacilityData { fixed, service, capacity }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceDistribution {
    /// Gaussian noise on every cost and capacity of `base`. Perturbed
    /// capacities are rounded to the nearest integer and clamped at zero.
    FacilityPerturb { base: FacilityData, cost_sd: f64, capacity_sd: f64 },
    /// Locations evenly spaced on the segment (0, 1/2)–(1, 1/2), clients uniform
    /// in the unit square, Euclidean service costs, unit opening costs.
    FacilityLine { locations: usize, clients: usize, capacity_max: i64 },
    Jeroslow { n: usize },
    /// Jeroslow instance with `n` drawn uniformly from `ns`.
    JeroslowMixture { ns: Vec<usize> },
    RandomPacking { n: usize, m: usize, coeff_max: i64 },
}

impl InstanceDistribution {
    /// The perturbation distribution with the noise level used throughout (sd 10).
    pub fn facility_perturb(base: FacilityData) -> Self {
        InstanceDistribution::FacilityPerturb { base, cost_sd: 10.0, capacity_sd: 10.0 }
    }

    pub fn facility_line() -> Self {
        InstanceDistribution::FacilityLine { locations: 80, clients: 80, capacity_max: 43 }
    }

    pub fn sample(&self, seed: u64) -> Result<IPInstance> {
        match self {
            InstanceDistribution::FacilityPerturb { .. } | InstanceDistribution::FacilityLine { .. } => gen_facility(self, seed),
            InstanceDistribution::Jeroslow { n } => gen_jeroslow(*n, jeroslow_constant(seed)),
            InstanceDistribution::JeroslowMixture { ns } => {
                if ns.is_empty() {
                    return Err(Error::InvalidArgument("empty Jeroslow mixture".into()));
                }
                let mut rng = stream(derive_seed(seed, 1));
                let n = ns[rng.gen_range(0..ns.len())];
                gen_jeroslow(n, jeroslow_constant(seed))
            }
            InstanceDistribution::RandomPacking { n, m, coeff_max } => Ok(gen_random_packing(*n, *m, *coeff_max, seed)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceDistribution::FacilityPerturb { .. } => "fl-perturb",
            InstanceDistribution::FacilityLine { .. } => "fl-line",
            InstanceDistribution::Jeroslow { .. } => "jeroslow",
            InstanceDistribution::JeroslowMixture { .. } => "jeroslow-mix",
            InstanceDistribution::RandomPacking { .. } => "packing",
        }
    }
}

fn jeroslow_constant(seed: u64) -> Rational {
    Rational::new(stream(seed).gen_range(-1000..=1000), 10)
}

/// Samples a facility location instance from one of the two facility distributions.
pub fn gen_facility(kind: &InstanceDistribution, seed: u64) -> Result<IPInstance> {
    match kind {
        InstanceDistribution::FacilityPerturb { base, cost_sd, capacity_sd } => {
            let mut g = Gaussian::new(seed);
            let fixed = base.fixed.iter().map(|f| f + &quantize(g.sample(0.0, *cost_sd))).collect();
            let service = base
                .service
                .iter()
                .map(|row| row.iter().map(|s| s + &quantize(g.sample(0.0, *cost_sd))).collect())
                .collect();
            let capacity = base.capacity.iter().map(|&k| (k as f64 + g.sample(0.0, *capacity_sd)).round().max(0.0) as i64).collect();
            Ok(FacilityData { fixed, service, capacity }.to_ip())
        }
        InstanceDistribution::FacilityLine { locations, clients, capacity_max } => {
            let mut rng = stream(seed);
            let loc: Vec<(f64, f64)> = (0..*locations)
                .map(|j| {
                    let t = if *locations > 1 { j as f64 / (*locations - 1) as f64 } else { 0.5 };
                    (t, 0.5)
                })
                .collect();
            let cl: Vec<(f64, f64)> = (0..*clients).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
            let service =
                cl.iter().map(|c| loc.iter().map(|l| quantize(((c.0 - l.0).powi(2) + (c.1 - l.1).powi(2)).sqrt())).collect()).collect();
            let capacity = (0..*locations).map(|_| rng.gen_range(0..=*capacity_max)).collect();
            Ok(FacilityData { fixed: vec![Rational::one(); *locations], service, capacity }.to_ip())
        }
        _ => Err(Error::InvalidArgument(format!("{} is not a facility distribution", kind.name()))),
    }
}

/// `max c` s.t. `2x_1 + ... + 2x_n = n`, `x` binary. Infeasible for odd `n`.
pub fn gen_jeroslow(n: usize, c: Rational) -> Result<IPInstance> {
    if n % 2 == 0 {
        return Err(Error::EvenN(n));
    }
    let row = Constraint::new(RVector::from_ints(&vec![2; n]), Sense::Eq, Rational::from(n));
    Ok(IPInstance::binary(ObjSense::Max, RVector::zeros(n), vec![row])?.with_offset(c))
}

/// Packing IP: `max c·x`, `A x <= b` with `A` in `{0..coeff_max}`, objective in
/// `{1..10}`, and upper bounds in `{1..4}`.
pub fn gen_random_packing(n: usize, m: usize, coeff_max: i64, seed: u64) -> IPInstance {
    let mut rng = stream(seed);
    let obj: RVector = (0..n).map(|_| Rational::from(rng.gen_range(1..=10))).collect();
    let rows = (0..m)
        .map(|_| {
            let a: RVector = (0..n).map(|_| Rational::from(rng.gen_range(0..=coeff_max))).collect();
            let b = rng.gen_range(1..=(coeff_max * n as i64).max(1));
            Constraint::le(a, Rational::from(b))
        })
        .collect();
    let upper = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    IPInstance::new(ObjSense::Max, obj, rows, upper).expect("integral by construction")
}

/// General small IP: coefficients in `[-coeff_max, coeff_max]`, mixed `<=`/`>=`
/// rows whose right-hand side keeps a random box point feasible with
/// probability about one half, objective in `[-5, 10]`, bounds in `{1..ub_max}`.
pub fn gen_random_ip(n: usize, m: usize, coeff_max: i64, ub_max: i64, seed: u64) -> IPInstance {
    let mut rng = stream(seed);
    let obj: RVector = (0..n).map(|_| Rational::from(rng.gen_range(-5..=10))).collect();
    let upper: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=ub_max)).collect();
    let anchor: Vec<i64> = upper.iter().map(|&u| rng.gen_range(0..=u)).collect();
    let rows = (0..m)
        .map(|_| {
            let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-coeff_max..=coeff_max)).collect();
            let at: i64 = a.iter().zip(&anchor).map(|(x, y)| x * y).sum();
            let slack = rng.gen_range(0..=coeff_max);
            let (sense, rhs) = if rng.gen_bool(0.5) { (Sense::Le, at + slack) } else { (Sense::Ge, at - slack) };
            Constraint::new(RVector::from_ints(&a), sense, Rational::from(rhs))
        })
        .collect();
    IPInstance::new(ObjSense::Max, obj, rows, upper).expect("integral by construction")
}
