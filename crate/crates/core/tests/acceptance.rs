//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits nonzero if any fails. Pass criterion numbers as arguments to run a
//! subset: `cargo test -p bclab --test acceptance -- 2 5`.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use bclab::arith::{rat, RVector, Rational};
use bclab::bc::{reduce_branchset, run, BCConfig, BranchBound, NodeStatus};
use bclab::cuts::{cg_cut, gmi_cut, is_valid_cut, sequential_gmi, to_equality_form, CutPlane, GmiParams};
use bclab::experiments::{line_scan, mu_sweep, CutProbe, ScanReport, SweepConfig, MAX_BREAKPOINTS};
use bclab::ip::rng::{derive_seed, stream};
use bclab::ip::{facility_base, gen_jeroslow, gen_random_ip, IPInstance, InstanceDistribution, ObjSense};
use bclab::lp::{Constraint, LinearProgram, LpOutcome};
use bclab::sensitivity::{
    build_arrangement, edge_surfaces, gmi_arrangement, gmi_floor_signature, indifference_poly, lp_edges, random_lp,
    verify_closed_form, EdgeId, Poly, SurfaceKind, SurfaceStore,
};
use bclab::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

// 1 ---------------------------------------------------------------------------

fn jeroslow_bound() -> Outcome {
    let mut sizes = Vec::new();
    for n in [3usize, 5, 7] {
        let ip = gen_jeroslow(n, Rational::zero()).map_err(|e| e.to_string())?;
        let plain = run(&ip, &[], &BCConfig::default());
        let bound = 1usize << ((n - 1) / 2);
        ensure(plain.size() >= bound, || format!("n={n}: size {} < {bound}", plain.size()))?;
        ensure(plain.optimal_value().is_none() && !plain.capped, || format!("n={n}: expected an infeasible, uncapped run"))?;

        let rescue = CutPlane::new(RVector::from_ints(&vec![1; n]), Rational::from((n / 2) as i64));
        let derived = cg_cut(&to_equality_form(&ip), &RVector::new(vec![rat(1, 2)])).map_err(|e| e.to_string())?;
        ensure(derived == rescue, || format!("n={n}: CG cut with u=1/2 is {derived}, expected {rescue}"))?;
        let cut = run(&ip, &[rescue], &BCConfig::default());
        ensure(cut.size() == 1 && cut.nodes[0].status == NodeStatus::FathomedInfeasible, || {
            format!("n={n}: with the rescue cut size {} status {:?}", cut.size(), cut.nodes[0].status)
        })?;
        sizes.push(format!("n={n}:{}", plain.size()));
    }
    Ok(format!("no-cut sizes {}; rescue cut closes every root", sizes.join(" ")))
}

// 2 ---------------------------------------------------------------------------

fn closed_form_oracle() -> Outcome {
    let mut trials = 0;
    let mut regimes: HashMap<&'static str, usize> = HashMap::new();
    for k in 0..20u64 {
        let n = 2 + (k % 3) as usize;
        let m = 2 + (k % 7) as usize;
        let lp = random_lp(n, m, derive_seed(2024, k));
        let witnesses = verify_closed_form(&lp, 10, derive_seed(77, k)).map_err(|e| e.to_string())?;
        for w in witnesses {
            trials += 1;
            ensure(w.verified, || format!("lp {k} (n={n}, m={m}): unverified witness {w:?}"))?;
            let tag = match w.regime {
                bclab::sensitivity::Regime::Unchanged => "unchanged",
                bclab::sensitivity::Regime::ActiveEdge(_) => "edge",
                bclab::sensitivity::Regime::Infeasible => "infeasible",
            };
            *regimes.entry(tag).or_default() += 1;
        }
    }
    ensure(trials == 200, || format!("ran {trials} trials"))?;
    let mut r: Vec<_> = regimes.into_iter().collect();
    r.sort();
    Ok(format!("200/200 verified, regimes {r:?}"))
}

// 3 ---------------------------------------------------------------------------

fn triangle() -> LinearProgram {
    LinearProgram::with_rows(
        RVector::from_ints(&[1, 1]),
        vec![Constraint::le(RVector::from_ints(&[1, 0]), Rational::one()), Constraint::le(RVector::from_ints(&[-1, 1]), Rational::zero())],
    )
    .unwrap()
}

fn edge_with_row(lp: &LinearProgram, row: usize) -> EdgeId {
    lp_edges(lp).into_iter().find(|e| e.0 == vec![row]).unwrap()
}

/// `p = lambda · q` for some nonzero rational `lambda`.
fn proportional(p: &Poly, q: &Poly) -> bool {
    let Some((mono, qc)) = q.terms().next() else { return false };
    let pc = p.coefficient(mono);
    if pc.is_zero() {
        return false;
    }
    let lambda = &pc / qc;
    (p - &q.scale(&lambda)).terms().next().is_none()
}

fn golden_geometry() -> Outcome {
    let lp = triangle();
    let poly = indifference_poly(&lp, &edge_with_row(&lp, 0), &edge_with_row(&lp, 1)).map_err(|e| e.to_string())?;
    let mut rng = stream(3);
    for _ in 0..50 {
        let t = Rational::new(rng.gen_range(-1000..=1000), rng.gen_range(1..=97));
        let on_diag = poly.eval(&[t.clone(), t.clone(), Rational::one()]);
        let on_anti = poly.eval(&[t.clone(), Rational::one() - &t, Rational::one()]);
        ensure(on_diag.is_zero() && on_anti.is_zero(), || format!("nonzero at t = {t}: {on_diag}, {on_anti}"))?;
    }
    ensure(!poly.eval(&[rat(1, 3), rat(1, 5), Rational::one()]).is_zero(), || "polynomial vanishes off the lines".into())?;

    // x+y <= 1, x+z <= 1, x <= 1, z <= 1, objective (1, 1, 1)
    let rows = [[1, 1, 0], [1, 0, 1], [1, 0, 0], [0, 0, 1]];
    let lp3 = LinearProgram::with_rows(
        RVector::from_ints(&[1, 1, 1]),
        rows.iter().map(|r| Constraint::le(RVector::from_ints(r), Rational::one())).collect(),
    )
    .unwrap();
    // {x+y=1, x=1} meets the polytope in a single point; the surface only needs the line
    let (ep, eq) = (EdgeId(vec![0, 2]), EdgeId(vec![1, 3]));
    let got = indifference_poly(&lp3, &ep, &eq).map_err(|e| e.to_string())?;
    let (a1, a2, a3, b) = (Poly::var(4, 0), Poly::var(4, 1), Poly::var(4, 2), Poly::var(4, 3));
    let expected = &(&(&(&a1 * &a2) - &(&a2 * &b)) - &(&a3 * &a3)) + &(&a3 * &b);
    ensure(proportional(&got, &expected), || format!("3-variable surface is {}", got.display_with(&["a1", "a2", "a3", "b"].map(String::from))))?;
    Ok("triangle quadric vanishes on 100 line points; 3-variable surface proportional".into())
}

// 4 ---------------------------------------------------------------------------

fn small_ip(k: u64, n_max: usize, ub_max: i64) -> IPInstance {
    for attempt in 0u64.. {
        let s = derive_seed(k, attempt);
        let n = 2 + (s % (n_max as u64 - 1)) as usize;
        let m = 1 + (s / 7 % 3) as usize;
        let ip = gen_random_ip(n, m, 4, ub_max, s);
        if ip.enumerate_integer_points().is_ok_and(|p| !p.is_empty()) {
            return ip;
        }
    }
    unreachable!()
}

fn multiplier(rng: &mut impl Rng, m: usize) -> GmiParams {
    GmiParams((0..m).map(|_| Rational::new(rng.gen_range(-32..=32), 16)).collect())
}

fn gmi_validity() -> Outcome {
    let (mut singles, mut pairs, mut degenerate) = (0, 0, 0);
    for k in 0..100u64 {
        let ip = small_ip(derive_seed(400, k), 4, 4);
        let tau = ip.tau_bound().map_err(|e| e.to_string())?;
        ensure(tau <= 4, || format!("ip {k}: tau {tau}"))?;
        let eq = to_equality_form(&ip);
        let m = eq.m();
        let mut rng = stream(derive_seed(401, k));
        for _ in 0..5 {
            let u = multiplier(&mut rng, m);
            match gmi_cut(&eq, &u) {
                Ok(cut) => {
                    singles += 1;
                    ensure(is_valid_cut(&ip, &cut).unwrap(), || format!("ip {k}: GMI cut {cut} for u = {} is invalid", u.0))?;
                }
                Err(Error::DegenerateCut { .. }) => degenerate += 1,
                Err(e) => return Err(format!("ip {k}: {e}")),
            }
            let u2 = multiplier(&mut rng, m + 1);
            match sequential_gmi(&eq, &[u.clone(), u2.clone()]) {
                Ok(cuts) => {
                    pairs += 1;
                    for c in &cuts {
                        ensure(is_valid_cut(&ip, c).unwrap(), || format!("ip {k}: sequential cut {c} for ({}, {}) is invalid", u.0, u2.0))?;
                    }
                }
                Err(Error::DegenerateCut { .. }) => degenerate += 1,
                Err(e) => return Err(format!("ip {k}: {e}")),
            }
        }
    }
    Ok(format!("{singles} single and {pairs} sequential cuts valid ({degenerate} degenerate skipped)"))
}

// 5 ---------------------------------------------------------------------------

/// Scan setup: random `alpha`, and a beta range from below every integer
/// point's `alpha·x` (invalid cuts) to above the LP maximum (vacuous cuts).
fn scan_setup(ip: &IPInstance, seed: u64) -> (RVector, Rational, Rational) {
    let mut rng = stream(seed);
    let n = ip.n();
    let alpha: RVector = loop {
        let a: RVector = (0..n).map(|_| Rational::from(rng.gen_range(-2..=3i64))).collect();
        if !a.is_zero() {
            break a;
        }
    };
    let points = ip.enumerate_integer_points().unwrap();
    let lo = points.iter().map(|p| alpha.dot(p)).min().unwrap() - Rational::one();
    let lp = ip.relaxation().with_objective(alpha.clone()).unwrap();
    let hi = lp.solve().value().unwrap().clone() + Rational::one();
    (alpha, lo, hi)
}

/// Random points of each open interval between refined breakpoints.
fn probe_intervals(report: &ScanReport, probe: &CutProbe, alpha: &RVector, rng: &mut impl Rng) -> Result<(), String> {
    let mut left = report.lo.clone();
    for (k, id) in report.intervals.iter().enumerate() {
        let right = report.breakpoints.get(k).map_or(report.hi.clone(), |b| b.lo.clone());
        let expected = &report.fingerprints[*id];
        for _ in 0..16 {
            let t = &left + &((&right - &left) * Rational::new(rng.gen_range(0..=1024), 1024));
            let got = probe.fingerprint(&CutPlane::new(alpha.clone(), t.clone()));
            ensure(&got == expected, || format!("interval {k} of {}: probe at beta = {t} differs", report.line))?;
        }
        if let Some(b) = report.breakpoints.get(k) {
            left = b.hi.clone();
        }
    }
    Ok(())
}

/// max 2x + 3y s.t. 2x + 3y <= 7, 3x - y <= 4, x, y in {0..3}.
fn planar_ip() -> IPInstance {
    IPInstance::new(
        ObjSense::Max,
        RVector::from_ints(&[2, 3]),
        vec![Constraint::le(RVector::from_ints(&[2, 3]), Rational::from(7)), Constraint::le(RVector::from_ints(&[3, -1]), Rational::from(4))],
        vec![3, 3],
    )
    .unwrap()
}

/// Reduced branching sets with levels in `[0, tau]`.
fn reduced_sets(n: usize, tau: i64) -> Vec<Vec<BranchBound>> {
    let per_var: Vec<Vec<Vec<BranchBound>>> = (0..n)
        .map(|j| {
            let ups: Vec<Option<BranchBound>> = std::iter::once(None).chain((0..tau).map(|l| Some(BranchBound::le(j, l)))).collect();
            let downs: Vec<Option<BranchBound>> = std::iter::once(None).chain((1..=tau).map(|l| Some(BranchBound::ge(j, l)))).collect();
            ups.iter().flat_map(|u| downs.iter().map(move |d| u.iter().chain(d.iter()).cloned().collect())).collect()
        })
        .collect();
    per_var.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter().flat_map(|s| opts.iter().map(move |o| reduce_branchset(&[s.clone(), o.clone()].concat()))).collect()
    })
}

/// Every surface that can decide a branch-and-cut event for a single cut on a
/// two-variable instance: per node LP the cut arrangement, branching levels
/// and integrality, incumbent comparisons, comparisons of node LP values
/// against each other, and validity hyperplanes through integer points.
fn tree_surfaces(ip: &IPInstance) -> Result<SurfaceStore, String> {
    let n = ip.n();
    let tau = ip.tau_bound().map_err(|e| e.to_string())?;
    let points = ip.enumerate_integer_points().map_err(|e| e.to_string())?;
    let relax = ip.relaxation();
    let c = relax.objective().clone();
    let mut store = SurfaceStore::for_cut_space(n);
    let nv = n + 1;
    let values: BTreeSet<Rational> = points.iter().map(|p| c.dot(p)).collect();
    // (scaled objective, denominator) per node edge; constants for vacuous-cut nodes
    let mut node_values: Vec<(Poly, Poly)> = Vec::new();
    for sigma in reduced_sets(n, tau) {
        let lp = relax.add_constraints(sigma.iter().map(|b| b.to_constraint(n))).unwrap();
        let z = match lp.solve() {
            LpOutcome::Optimal(o) => o.value,
            _ => continue,
        };
        node_values.push((Poly::constant(nv, z), Poly::constant(nv, Rational::one())));
        store.merge(&build_arrangement(&lp).map_err(|e| e.to_string())?);
        for e in lp_edges(&lp) {
            let s = edge_surfaces(&lp, &e);
            for num in &s.numerators {
                for level in 0..=tau {
                    store.insert(num - &s.denominator.scale(&Rational::from(level)), SurfaceKind::Extra("level".into()));
                }
            }
            let obj = s.scaled_objective(&c);
            for v in &values {
                store.insert(&obj - &s.denominator.scale(v), SurfaceKind::Extra("incumbent".into()));
            }
            node_values.push((obj, s.denominator.clone()));
        }
    }
    for (i, (p, d)) in node_values.iter().enumerate() {
        for (q, e) in &node_values[i + 1..] {
            store.insert(&(p * e) - &(q * d), SurfaceKind::Extra("node order".into()));
        }
    }
    for p in &points {
        let mut coeffs = p.to_vec();
        coeffs.push(Rational::from(-1));
        store.insert(Poly::linear(&coeffs, Rational::zero()), SurfaceKind::Extra("validity".into()));
    }
    Ok(store)
}

fn piecewise_constancy() -> Outcome {
    let cfg = BCConfig::default();
    let mut instances = vec![planar_ip()];
    instances.extend((0..9u64).map(|k| small_ip(derive_seed(500, k), 3, 3)));
    let mut counts = Vec::new();
    for (k, ip) in instances.iter().enumerate() {
        let (alpha, lo, hi) = if k == 0 { (RVector::from_ints(&[1, 1]), Rational::zero(), Rational::from(5)) } else { scan_setup(ip, derive_seed(501, k as u64)) };
        let report = line_scan(ip, &alpha, &lo, &hi, 32, &cfg).map_err(|e| e.to_string())?;
        ensure(report.breakpoints.len() <= MAX_BREAKPOINTS, || format!("instance {k}: {} breakpoints", report.breakpoints.len()))?;
        for w in report.intervals.windows(2) {
            ensure(w[0] != w[1], || format!("instance {k}: adjacent intervals share a fingerprint"))?;
        }
        let probe = CutProbe::new(ip, cfg.clone()).map_err(|e| e.to_string())?;
        probe_intervals(&report, &probe, &alpha, &mut stream(derive_seed(502, k as u64)))?;
        counts.push(report.breakpoints.len());

        if k == 0 {
            let store = tree_surfaces(ip)?;
            let mut origin = alpha.to_vec();
            origin.push(Rational::zero());
            let mut dir = vec![Rational::zero(); ip.n()];
            dir.push(Rational::one());
            let slack = (&report.hi - &report.lo) / Rational::from(1i64 << 20);
            for b in &report.breakpoints {
                ensure(store.has_zero_on_segment(&origin, &dir, &(&b.lo - &slack), &(&b.hi + &slack)), || {
                    format!("breakpoint [{}, {}] of the planar instance is not near any of {} surfaces", b.lo, b.hi, store.len())
                })?;
            }
        }
    }
    Ok(format!("breakpoints per instance {counts:?}; planar breakpoints all on stored surfaces"))
}

// 6 ---------------------------------------------------------------------------

fn cell_invariance() -> Outcome {
    let mut ips = vec![gen_jeroslow(3, Rational::zero()).unwrap(), gen_jeroslow(5, Rational::zero()).unwrap()];
    ips.extend((0..4u64).map(|k| small_ip(derive_seed(600, k), 3, 3)));
    let box_size = Rational::from(2);
    let forms: Vec<_> = ips.iter().map(to_equality_form).collect();
    let arrangements = forms.iter().map(|eq| gmi_arrangement(eq, &box_size)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let mut pairs = 0;
    let mut attempts = 0u64;
    let mut rng = stream(601);
    while pairs < 1000 {
        attempts += 1;
        ensure(attempts < 200_000, || format!("only {pairs} same-cell pairs found"))?;
        let which = (attempts % ips.len() as u64) as usize;
        let (eq, arr) = (&forms[which], &arrangements[which]);
        let m = eq.m();
        let u: Vec<Rational> = (0..m).map(|_| Rational::new(rng.gen_range(-2000..=2000), 1000)).collect();
        let scale = Rational::new(1, 10i64.pow(rng.gen_range(1..=4)));
        let v: Vec<Rational> = u.iter().map(|x| x + &(&scale * &Rational::new(rng.gen_range(-1000..=1000), 1000))).collect();
        if v.iter().any(|x| x.abs() > box_size) || arr.sign_vector(&u) != arr.sign_vector(&v) {
            continue;
        }
        pairs += 1;
        let (fu, fv) = (gmi_floor_signature(eq, &u), gmi_floor_signature(eq, &v));
        ensure(fu == fv, || format!("same cell, different floors at u = {u:?}, v = {v:?}"))?;
    }
    Ok(format!("1000 same-cell pairs agree ({attempts} draws)"))
}

// 7 ---------------------------------------------------------------------------

fn brute_force(ip: &IPInstance) -> Option<Rational> {
    let values = ip.enumerate_integer_points().unwrap().into_iter().map(|p| ip.value(&p));
    match ip.sense() {
        ObjSense::Max => values.max(),
        ObjSense::Min => values.min(),
    }
}

fn global_correctness() -> Outcome {
    let cfg = BCConfig::default();
    let mut nonempty = 0;
    for k in 0..100u64 {
        let s = derive_seed(700, k);
        let base = gen_random_ip(2 + (k % 3) as usize, 1 + (k % 4) as usize, 4, 3, s);
        let sense = if k % 2 == 0 { ObjSense::Max } else { ObjSense::Min };
        let ip = IPInstance::new(sense, base.objective().clone(), base.rows().to_vec(), base.upper().to_vec()).unwrap();
        let expected = brute_force(&ip);
        nonempty += usize::from(expected.is_some());
        let plain = run(&ip, &[], &cfg);
        ensure(!plain.capped && plain.optimal_value() == expected, || format!("ip {k}: got {:?}, brute force {expected:?}", plain.optimal_value()))?;

        let mut rng = stream(derive_seed(701, k));
        let alpha: RVector = (0..ip.n()).map(|_| Rational::from(rng.gen_range(-3..=3i64))).collect();
        let points = ip.enumerate_integer_points().unwrap();
        let top = points.iter().map(|p| alpha.dot(p)).max().unwrap_or_else(Rational::zero);
        let cut = CutPlane::new(alpha, top + Rational::new(rng.gen_range(0..=2), 2));
        ensure(is_valid_cut(&ip, &cut).unwrap(), || format!("ip {k}: generated cut invalid"))?;
        let with_cut = run(&ip, &[cut], &cfg);
        ensure(!with_cut.capped && with_cut.optimal_value() == expected, || {
            format!("ip {k} with cut: got {:?}, brute force {expected:?}", with_cut.optimal_value())
        })?;
    }
    Ok(format!("100/100 match brute force with and without a cut ({nonempty} feasible)"))
}

// 8 ---------------------------------------------------------------------------

fn sweep_protocol() -> Outcome {
    let base = facility_base(6, 6, 100.0, 6, 8);
    let mut cfg = SweepConfig::new(InstanceDistribution::facility_perturb(base), 50, 2026);
    cfg.bc = BCConfig::with_kappa(10_000);
    let report = mu_sweep(&cfg).map_err(|e| e.to_string())?;
    let again = mu_sweep(&cfg).map_err(|e| e.to_string())?;
    let csv = report.to_csv();
    ensure(csv == again.to_csv(), || "CSV differs between identical runs".into())?;
    ensure(csv.starts_with("mu,mean_tree_size,sd,n_samples\n") && csv.lines().count() == 102, || "unexpected CSV shape".into())?;
    let mut varying = 0;
    for (s, trace) in report.traces.iter().enumerate() {
        ensure(trace.iter().all(|p| !p.capped), || format!("instance {s} hit the cap"))?;
        let selections: BTreeSet<&Vec<usize>> = trace.iter().map(|p| &p.selection).collect();
        let sizes: BTreeSet<usize> = trace.iter().map(|p| p.size).collect();
        ensure(sizes.len() <= selections.len(), || format!("instance {s}: {} sizes from {} selections", sizes.len(), selections.len()))?;
        let mut by_sel: HashMap<&Vec<usize>, usize> = HashMap::new();
        for p in trace {
            ensure(*by_sel.entry(&p.selection).or_insert(p.size) == p.size, || format!("instance {s}: one selection, two sizes"))?;
        }
        varying += usize::from(sizes.len() > 1);
    }
    let first = &report.rows[0];
    let last = report.rows.last().unwrap();
    Ok(format!(
        "50 instances, mean size {:.2} at mu=0 and {:.2} at mu=1, {varying} instances vary with mu",
        first.mean_tree_size, last.mean_tree_size
    ))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 8] = [
        (1, "Jeroslow lower bound and rescue cut", secs(1), jeroslow_bound),
        (2, "closed-form oracle equivalence", secs(60), closed_form_oracle),
        (3, "golden indifference geometry", secs(1), golden_geometry),
        (4, "GMI validity", secs(120), gmi_validity),
        (5, "tree piecewise constancy", secs(600), piecewise_constancy),
        (6, "floor-cell invariance", secs(60), cell_invariance),
        (7, "branch-and-cut global correctness", secs(300), global_correctness),
        (8, "mu-sweep protocol", secs(900), sweep_protocol),
    ];
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, name, limit, f) in criteria {
        if !selected.is_empty() && !selected.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("took {:.1}s, limit {}s; {detail}", elapsed.as_secs_f64(), limit.as_secs())),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {k} PASS [{:.2}s <= {}s] {name}: {detail}", elapsed.as_secs_f64(), limit.as_secs()),
            Err(why) => {
                failed += 1;
                println!("criterion {k} FAIL [{:.2}s] {name}: {why}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
