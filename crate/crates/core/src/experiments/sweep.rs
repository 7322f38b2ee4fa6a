use std::collections::HashMap;
use std::fmt::Write as _;

use crate::arith::Rational;
use crate::bc::{run, BCConfig};
use crate::cuts::{root_cut_pool, score_cuts, select_cut_indices, CutPlane};
use crate::error::{Error, Result};
use crate::ip::rng::derive_seed;
use crate::ip::InstanceDistribution;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub distribution: InstanceDistribution,
    pub samples: usize,
    pub mu_step: Rational,
    pub cuts_per_instance: usize,
    pub bc: BCConfig,
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(distribution: InstanceDistribution, samples: usize, seed: u64) -> Self {
        SweepConfig { distribution, samples, mu_step: Rational::new(1, 100), cuts_per_instance: 5, bc: BCConfig::default(), seed }
    }

    /// `0, step, 2·step, ...` up to and including 1 when it is a multiple.
    pub fn mu_grid(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        let mut mu = Rational::zero();
        while mu <= Rational::one() {
            out.push(mu.clone());
            mu += &self.mu_step;
        }
        out
    }
}

/// One `(mu, selection, tree size)` point for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracePoint {
    pub mu: Rational,
    pub selection: Vec<usize>,
    pub size: usize,
    pub capped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub mu: Rational,
    pub mean_tree_size: f64,
    pub sd: f64,
    pub n_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Per instance, one point per grid value.
    pub traces: Vec<Vec<TracePoint>>,
    /// Number of candidate cuts generated per instance.
    pub pool_sizes: Vec<usize>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("mu,mean_tree_size,sd,n_samples\n");
        for r in &self.rows {
            writeln!(s, "{},{:.6},{:.6},{}", r.mu.to_f64(), r.mean_tree_size, r.sd, r.n_samples).unwrap();
        }
        s
    }
}

/// Sample mean and sample standard deviation (`n - 1` denominator; 0 for one sample).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Tree size of every instance under every `mu`, selecting root cuts by the
/// weighted parallelism/efficacy score. Runs are shared between grid values
/// that select the same cuts.
pub fn mu_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if !cfg.mu_step.is_positive() || cfg.mu_step > Rational::one() {
        return Err(Error::InvalidArgument(format!("mu step {} outside (0, 1]", cfg.mu_step)));
    }
    let grid = cfg.mu_grid();
    let mut traces = Vec::with_capacity(cfg.samples);
    let mut pool_sizes = Vec::with_capacity(cfg.samples);
    for s in 0..cfg.samples {
        let ip = cfg.distribution.sample(derive_seed(cfg.seed, s as u64))?;
        let pool = root_cut_pool(&ip)?;
        pool_sizes.push(pool.cuts.len());
        let scored = match &pool.x_lp {
            Some(x) => score_cuts(&pool.cuts, &pool.objective, x),
            None => Vec::new(),
        };
        let mut cache: HashMap<Vec<usize>, (usize, bool)> = HashMap::new();
        let mut trace = Vec::with_capacity(grid.len());
        for mu in &grid {
            let selection = select_cut_indices(&scored, mu.to_f64(), cfg.cuts_per_instance);
            let (size, capped) = *cache.entry(selection.clone()).or_insert_with(|| {
                let cuts: Vec<CutPlane> = selection.iter().map(|&i| pool.cuts[i].clone()).collect();
                let tree = run(&ip, &cuts, &cfg.bc);
                (tree.size(), tree.capped)
            });
            trace.push(TracePoint { mu: mu.clone(), selection, size, capped });
        }
        traces.push(trace);
    }
    let rows = grid
        .iter()
        .enumerate()
        .map(|(k, mu)| {
            let sizes: Vec<f64> = traces.iter().map(|t| t[k].size as f64).collect();
            let (mean, sd) = mean_sd(&sizes);
            SweepRow { mu: mu.clone(), mean_tree_size: mean, sd, n_samples: sizes.len() }
        })
        .collect();
    Ok(SweepReport { rows, traces, pool_sizes })
}
