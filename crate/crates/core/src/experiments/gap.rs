use std::collections::HashMap;
use std::fmt::Write as _;

use crate::bc::{run, BCConfig};
use crate::cuts::{gmi_cut, to_equality_form, GmiParams};
use crate::error::{Error, Result};
use crate::ip::rng::derive_seed;
use crate::ip::InstanceDistribution;

pub const HOLDOUT_FACTOR: usize = 10;
pub const GAP_QUANTILE: f64 = 0.9;

#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub n: usize,
    pub mean_gap: f64,
    pub q90_gap: f64,
    /// One gap per repetition.
    pub gaps: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    /// Holdout mean tree size per multiplier.
    pub reference: Vec<f64>,
    pub holdout_size: usize,
    pub rows: Vec<GapRow>,
}

impl GapReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,mean_gap,q90_gap\n");
        for r in &self.rows {
            writeln!(s, "{},{:.6},{:.6}", r.n, r.mean_gap, r.q90_gap).unwrap();
        }
        s
    }
}

/// Nearest-rank quantile of `xs` (0 when empty).
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

struct SizeTable<'a> {
    distribution: &'a InstanceDistribution,
    u_grid: &'a [GmiParams],
    bc: &'a BCConfig,
    cache: HashMap<u64, Vec<usize>>,
}

impl SizeTable<'_> {
    /// Tree size per multiplier on the instance drawn from `seed`; a multiplier
    /// whose cut is degenerate runs without a cut.
    fn sizes(&mut self, seed: u64) -> Result<&[usize]> {
        if !self.cache.contains_key(&seed) {
            let ip = self.distribution.sample(seed)?;
            let eq = to_equality_form(&ip);
            let mut out = Vec::with_capacity(self.u_grid.len());
            for u in self.u_grid {
                let cuts = match gmi_cut(&eq, u) {
                    Ok(c) => vec![c],
                    Err(Error::DegenerateCut { .. }) => vec![],
                    Err(e) => return Err(e),
                };
                out.push(run(&ip, &cuts, self.bc).size());
            }
            self.cache.insert(seed, out);
        }
        Ok(&self.cache[&seed])
    }

    fn means(&mut self, stream: u64, count: usize) -> Result<Vec<f64>> {
        let mut total = vec![0usize; self.u_grid.len()];
        for k in 0..count {
            for (t, s) in total.iter_mut().zip(self.sizes(derive_seed(stream, k as u64))?) {
                *t += s;
            }
        }
        Ok(total.into_iter().map(|t| t as f64 / count as f64).collect())
    }
}

/// Gap estimator with explicit seed streams: instance `k` of a stream `s` is
/// drawn from `derive_seed(s, k)`.
pub fn generalization_gap_with(
    distribution: &InstanceDistribution,
    u_grid: &[GmiParams],
    n_schedule: &[usize],
    holdout_seed: u64,
    holdout_size: usize,
    train_seeds: &[u64],
    bc: &BCConfig,
) -> Result<GapReport> {
    if u_grid.is_empty() {
        return Err(Error::InvalidArgument("empty multiplier grid".into()));
    }
    if holdout_size == 0 || train_seeds.is_empty() || n_schedule.contains(&0) {
        return Err(Error::InvalidArgument("holdout size, repetitions and every N must be positive".into()));
    }
    let mut table = SizeTable { distribution, u_grid, bc, cache: HashMap::new() };
    let reference = table.means(holdout_seed, holdout_size)?;
    let mut rows = Vec::with_capacity(n_schedule.len());
    for &n in n_schedule {
        let mut gaps = Vec::with_capacity(train_seeds.len());
        for &s in train_seeds {
            let train = table.means(s, n)?;
            gaps.push(train.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        }
        let mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
        rows.push(GapRow { n, mean_gap, q90_gap: quantile(&gaps, GAP_QUANTILE), gaps });
    }
    Ok(GapReport { reference, holdout_size, rows })
}

/// Holdout of `10 · max N` instances from `derive_seed(seed, 0)`; repetition
/// `r` trains on the stream `derive_seed(seed, r + 1)`.
pub fn generalization_gap(
    distribution: &InstanceDistribution,
    u_grid: &[GmiParams],
    n_schedule: &[usize],
    repetitions: usize,
    seed: u64,
    bc: &BCConfig,
) -> Result<GapReport> {
    let max_n = n_schedule.iter().copied().max().unwrap_or(0);
    let train: Vec<u64> = (0..repetitions as u64).map(|r| derive_seed(seed, r + 1)).collect();
    generalization_gap_with(distribution, u_grid, n_schedule, derive_seed(seed, 0), HOLDOUT_FACTOR * max_n, &train, bc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, RVector};

    fn grid() -> Vec<GmiParams> {
        [rat(1, 2), rat(1, 3), rat(2, 5)].into_iter().map(|u| GmiParams(RVector::new(vec![u]))).collect()
    }

    #[test]
    fn identical_samples_have_zero_gap() {
        let d = InstanceDistribution::JeroslowMixture { ns: vec![3, 5] };
        let r = generalization_gap_with(&d, &grid(), &[6], 11, 6, &[11], &BCConfig::default()).unwrap();
        assert_eq!(r.rows[0].gaps, vec![0.0]);
    }

    #[test]
    fn deterministic_distribution_has_zero_gap() {
        let d = InstanceDistribution::Jeroslow { n: 5 };
        let r = generalization_gap(&d, &grid(), &[1, 2, 4], 3, 7, &BCConfig::default()).unwrap();
        assert_eq!(r.holdout_size, 40);
        for row in &r.rows {
            assert_eq!((row.mean_gap, row.q90_gap), (0.0, 0.0));
        }
        assert_eq!(r.to_csv(), "n,mean_gap,q90_gap\n1,0.000000,0.000000\n2,0.000000,0.000000\n4,0.000000,0.000000\n");
    }

    #[test]
    fn nearest_rank() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(&xs, 0.9), 9.0);
        assert_eq!(quantile(&xs[..1], 0.9), 1.0);
        assert_eq!(quantile(&[], 0.9), 0.0);
    }

    #[test]
    fn bad_arguments() {
        let d = InstanceDistribution::Jeroslow { n: 3 };
        assert!(generalization_gap(&d, &[], &[1], 1, 0, &BCConfig::default()).is_err());
        assert!(generalization_gap(&d, &grid(), &[0], 1, 0, &BCConfig::default()).is_err());
        assert!(generalization_gap(&d, &grid(), &[1], 0, 0, &BCConfig::default()).is_err());
    }
}
