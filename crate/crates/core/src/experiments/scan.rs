use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::arith::{RVector, Rational};
use crate::bc::{fingerprint, run, BCConfig};
use crate::cuts::{gmi_cut, is_valid_on, to_equality_form, CutPlane, GmiParams};
use crate::error::{Error, Result};
use crate::ip::IPInstance;

/// Fingerprint class of a cut that removes an integer-feasible point.
pub const INVALID: &str = "INVALID";
/// Fingerprint class of a multiplier whose GMI cut is vacuous.
pub const DEGENERATE: &str = "DEGENERATE";
/// Bisection stops once a bracket is at most `(hi - lo) / 2^BISECTION_DEPTH` wide.
pub const BISECTION_DEPTH: u32 = 20;

/// A point where the fingerprint changes, bracketed by `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Breakpoint {
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub line: String,
    pub lo: Rational,
    pub hi: Rational,
    pub breakpoints: Vec<Breakpoint>,
    /// Fingerprint id of each interval between consecutive breakpoints.
    pub intervals: Vec<usize>,
    /// Interned fingerprints; ids index this list.
    pub fingerprints: Vec<String>,
    /// Every evaluated parameter value with its fingerprint id, sorted.
    pub samples: Vec<(Rational, usize)>,
    pub resolution: Rational,
}

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,fingerprint_id\n");
        for (t, id) in &self.samples {
            writeln!(s, "{t},{id}").unwrap();
        }
        s
    }

    /// Sidecar table mapping ids to SHA-256 digests of the fingerprints.
    pub fn fingerprint_csv(&self) -> String {
        let mut s = String::from("fingerprint_id,fingerprint_hash\n");
        for (id, f) in self.fingerprints.iter().enumerate() {
            writeln!(s, "{id},{}", fingerprint_hash(f)).unwrap();
        }
        s
    }

    /// Index of the interval containing `t` (breakpoint brackets go to the left interval).
    pub fn interval_of(&self, t: &Rational) -> usize {
        self.breakpoints.iter().take_while(|b| *t > b.hi).count()
    }
}

pub fn fingerprint_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

struct Interner<F> {
    class: F,
    ids: HashMap<String, usize>,
    names: Vec<String>,
    samples: Vec<(Rational, usize)>,
}

impl<F: FnMut(&Rational) -> String> Interner<F> {
    fn eval(&mut self, t: &Rational) -> usize {
        let f = (self.class)(t);
        let next = self.names.len();
        let id = *self.ids.entry(f.clone()).or_insert(next);
        if id == next {
            self.names.push(f);
        }
        self.samples.push((t.clone(), id));
        id
    }

    fn refine(&mut self, a: Rational, fa: usize, b: Rational, fb: usize, width: &Rational, out: &mut Vec<Breakpoint>) {
        if fa == fb {
            return;
        }
        if &b - &a <= *width {
            out.push(Breakpoint { lo: a, hi: b });
            return;
        }
        let mid = (&a + &b) / Rational::from(2);
        let fm = self.eval(&mid);
        self.refine(a, fa, mid.clone(), fm, width, out);
        self.refine(mid, fm, b, fb, width, out);
    }
}

/// Evaluates `class` at `resolution` evenly spaced points of `[lo, hi]` and
/// bisects every adjacent pair with different classes down to width
/// `(hi - lo) / 2^20`.
pub fn scan_parameter(line: String, lo: &Rational, hi: &Rational, resolution: usize, class: impl FnMut(&Rational) -> String) -> Result<ScanReport> {
    if resolution < 2 {
        return Err(Error::InvalidArgument("scan resolution must be at least 2".into()));
    }
    if hi <= lo {
        return Err(Error::InvalidArgument(format!("empty scan range [{lo}, {hi}]")));
    }
    let width = (hi - lo) / Rational::from(2i64.pow(BISECTION_DEPTH));
    let step = (hi - lo) / Rational::from(resolution - 1);
    let mut it = Interner { class, ids: HashMap::new(), names: Vec::new(), samples: Vec::new() };
    let grid: Vec<Rational> = (0..resolution).map(|k| lo + &(&step * &Rational::from(k))).collect();
    let ids: Vec<usize> = grid.iter().map(|t| it.eval(t)).collect();
    let mut breakpoints = Vec::new();
    for k in 0..resolution - 1 {
        it.refine(grid[k].clone(), ids[k], grid[k + 1].clone(), ids[k + 1], &width, &mut breakpoints);
    }
    let mut samples = it.samples;
    samples.sort();
    samples.dedup();
    let mut intervals = vec![ids[0]];
    for b in &breakpoints {
        let right = samples.iter().find(|(t, _)| *t == b.hi).map(|(_, id)| *id).expect("bracket ends are sampled");
        intervals.push(right);
    }
    Ok(ScanReport { line, lo: lo.clone(), hi: hi.clone(), breakpoints, intervals, fingerprints: it.names, samples, resolution: width })
}

/// Fingerprints branch-and-cut with the single root cut `alpha · x <= beta`;
/// cuts removing an integer point are classed [`INVALID`].
pub struct CutProbe<'a> {
    ip: &'a IPInstance,
    points: Vec<RVector>,
    config: BCConfig,
}

impl<'a> CutProbe<'a> {
    pub fn new(ip: &'a IPInstance, config: BCConfig) -> Result<Self> {
        Ok(CutProbe { ip, points: ip.enumerate_integer_points()?, config })
    }

    pub fn fingerprint(&self, cut: &CutPlane) -> String {
        if !is_valid_on(&self.points, cut) {
            return INVALID.to_string();
        }
        fingerprint(&run(self.ip, std::slice::from_ref(cut), &self.config))
    }
}

/// Scan of `beta` over `[beta_lo, beta_hi]` for the cut `alpha · x <= beta`.
pub fn line_scan(ip: &IPInstance, alpha: &RVector, beta_lo: &Rational, beta_hi: &Rational, resolution: usize, config: &BCConfig) -> Result<ScanReport> {
    if alpha.len() != ip.n() {
        return Err(Error::DimensionMismatch(format!("alpha has length {}, n = {}", alpha.len(), ip.n())));
    }
    let probe = CutProbe::new(ip, config.clone())?;
    scan_parameter(format!("alpha={alpha} beta in [{beta_lo}, {beta_hi}]"), beta_lo, beta_hi, resolution, |b| {
        probe.fingerprint(&CutPlane::new(alpha.clone(), b.clone()))
    })
}

/// Breakpoint ceiling for scans of the small-instance suite.
pub const MAX_BREAKPOINTS: usize = 64;

/// Largest number of multipliers [`gmi_grid_scan`] accepts.
pub const GRID_MAX_M: usize = 8;

/// GMI fingerprint at multiplier `u` ([`DEGENERATE`] when the cut is vacuous).
pub fn gmi_fingerprint(ip: &IPInstance, u: &RVector, config: &BCConfig) -> Result<String> {
    let eq = to_equality_form(ip);
    match gmi_cut(&eq, &GmiParams(u.clone())) {
        Ok(cut) => Ok(fingerprint(&run(ip, &[cut], config))),
        Err(Error::DegenerateCut { .. }) => Ok(DEGENERATE.to_string()),
        Err(e) => Err(e),
    }
}

/// One scan per coordinate of `u ∈ [-U, U]^m`, each along the axis through
/// `anchor` (default: every coordinate `U / 3`).
pub fn gmi_grid_scan(ip: &IPInstance, box_size: &Rational, resolution: usize, config: &BCConfig, anchor: Option<RVector>) -> Result<Vec<ScanReport>> {
    let eq = to_equality_form(ip);
    let m = eq.m();
    if m > GRID_MAX_M {
        return Err(Error::BudgetExceeded(format!("{m} multipliers exceed the grid budget of {GRID_MAX_M}")));
    }
    if !box_size.is_positive() {
        return Err(Error::InvalidArgument("box size must be positive".into()));
    }
    let anchor = anchor.unwrap_or_else(|| RVector::new(vec![box_size / &Rational::from(3); m]));
    if anchor.len() != m {
        return Err(Error::DimensionMismatch(format!("anchor has length {}, m = {m}", anchor.len())));
    }
    (0..m)
        .map(|j| {
            let mut err = None;
            let report = scan_parameter(format!("u{} through {anchor}", j + 1), &-box_size, box_size, resolution, |t| {
                let mut u = anchor.clone();
                u[j] = t.clone();
                match gmi_cut(&eq, &GmiParams(u)) {
                    Ok(cut) => fingerprint(&run(ip, &[cut], config)),
                    Err(Error::DegenerateCut { .. }) => DEGENERATE.to_string(),
                    Err(e) => {
                        err.get_or_insert(e);
                        String::new()
                    }
                }
            })?;
            match err {
                Some(e) => Err(e),
                None => Ok(report),
            }
        })
        .collect()
}
