//! `bclab` command-line interface.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 budget or capacity exceeded.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bclab::arith::{RVector, Rational};
use bclab::bc::{dump, fingerprint, run, BCConfig, DEFAULT_KAPPA};
use bclab::cuts::{gmi_cut, parse_cuts, sequential_gmi, to_equality_form, GmiParams};
use bclab::experiments::{fingerprint_hash, generalization_gap, line_scan, mu_sweep, SweepConfig};
use bclab::ip::{facility_base, parse_instance, serialize_instance, IPInstance, InstanceDistribution};
use bclab::sensitivity::{build_arrangement, verify_closed_form, Regime};
use bclab::Error;

#[derive(Parser)]
#[command(name = "bclab", version, about = "Exact-rational branch-and-cut laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run branch-and-cut on an instance and print tree statistics.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// File of root cuts, one `cut a1 ... an <= b` per line.
        #[arg(long)]
        cuts: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_KAPPA)]
        kappa: usize,
        /// Also print one line per node.
        #[arg(long)]
        dump: bool,
    },
    /// Sample an instance.
    Gen {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the GMI cut for a multiplier; repeat `--u` for a sequential family.
    Gmi {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated rationals, e.g. "1/2,-1/3".
        #[arg(long, required = true)]
        u: Vec<String>,
    },
    /// Closed-form LP sensitivity of the instance's relaxation.
    Sensitivity {
        #[command(subcommand)]
        action: SensitivityCommand,
    },
    /// Fingerprint branch-and-cut along the cut family `alpha · x <= beta`.
    Scan {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta_lo: String,
        #[arg(long, allow_hyphen_values = true)]
        beta_hi: String,
        #[arg(long, default_value_t = 32)]
        res: usize,
        #[arg(long, default_value_t = DEFAULT_KAPPA)]
        kappa: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fingerprint hash table; defaults to `<out>.fingerprints.csv` when `--out` is given,
        /// and is skipped when neither is.
        #[arg(long)]
        fingerprints: Option<PathBuf>,
    },
    /// Mean tree size per mu over a sample, selecting root cuts by score weight mu.
    Sweep {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value = "1/100")]
        mu_step: String,
        #[arg(long, default_value_t = 5)]
        cuts_per_instance: usize,
        #[arg(long, default_value_t = DEFAULT_KAPPA)]
        kappa: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generalization gap of GMI tree sizes against a holdout.
    Gap {
        #[command(flatten)]
        dist: DistArgs,
        /// One multiplier per line, comma-separated rationals.
        #[arg(long)]
        u_grid: PathBuf,
        #[arg(long, default_value = "10,20,40")]
        n_schedule: String,
        #[arg(long, default_value_t = 10)]
        repetitions: usize,
        #[arg(long, default_value_t = DEFAULT_KAPPA)]
        kappa: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SensitivityCommand {
    /// Check the closed form against the simplex on random cuts.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Print every surface of the cut-parameter arrangement.
    Arrange {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DistKind {
    FlPerturb,
    FlLine,
    Jeroslow,
    JeroslowMix,
    Packing,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    dist: DistKind,
    /// Variable count for jeroslow and packing.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Row count for packing.
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 6)]
    coeff_max: i64,
    /// Odd sizes for jeroslow-mix.
    #[arg(long, default_value = "3,5,7")]
    ns: String,
    /// Facility counts; fl-line defaults to 80 x 80 with capacity 43.
    #[arg(long)]
    locations: Option<usize>,
    #[arg(long)]
    clients: Option<usize>,
    #[arg(long)]
    capacity_max: Option<i64>,
    /// Seed of the fl-perturb base instance.
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
}

impl DistArgs {
    fn build(&self) -> Result<InstanceDistribution, Failure> {
        Ok(match self.dist {
            DistKind::FlPerturb => InstanceDistribution::facility_perturb(facility_base(
                self.locations.unwrap_or(6),
                self.clients.unwrap_or(6),
                100.0,
                self.capacity_max.unwrap_or(6),
                self.base_seed,
            )),
            DistKind::FlLine => InstanceDistribution::FacilityLine {
                locations: self.locations.unwrap_or(80),
                clients: self.clients.unwrap_or(80),
                capacity_max: self.capacity_max.unwrap_or(43),
            },
            DistKind::Jeroslow => InstanceDistribution::Jeroslow { n: self.n },
            DistKind::JeroslowMix => InstanceDistribution::JeroslowMixture { ns: parse_list(&self.ns, "--ns")? },
            DistKind::Packing => InstanceDistribution::RandomPacking { n: self.n, m: self.m, coeff_max: self.coeff_max },
        })
    }
}

enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::TooLarge { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| Failure::Usage(format!("{what}: cannot parse {t:?}"))))
        .collect()
}

fn parse_vector(text: &str, what: &str) -> Result<RVector, Failure> {
    Ok(RVector::new(parse_list::<Rational>(text, what)?))
}

fn parse_rational(text: &str, what: &str) -> Result<Rational, Failure> {
    text.trim().parse().map_err(|_| Failure::Usage(format!("{what}: cannot parse {text:?}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<IPInstance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Usage(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

fn solve(instance: &Path, cuts: Option<&Path>, kappa: usize, with_dump: bool) -> Result<(), Failure> {
    let ip = read_instance(instance)?;
    let cuts = match cuts {
        Some(p) => parse_cuts(&read(p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => Vec::new(),
    };
    if let Some(c) = cuts.iter().find(|c| c.n() != ip.n()) {
        return Err(Failure::Usage(format!("cut has {} coefficients, instance has {} variables", c.n(), ip.n())));
    }
    let tree = run(&ip, &cuts, &BCConfig { kappa, ..BCConfig::default() });
    let status = match (&tree.optimal, tree.capped) {
        (_, true) => "capped",
        (Some(_), false) => "optimal",
        (None, false) => "infeasible",
    };
    let mut s = format!("status {status}\nsize {}\n", tree.size());
    if let (Some(v), Some(x)) = (tree.optimal_value(), &tree.optimal) {
        writeln!(s, "optimum {v}\nx {}", x.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")).unwrap();
    }
    writeln!(s, "incumbents {}\nfingerprint {}", tree.incumbent_trace.len(), fingerprint_hash(&fingerprint(&tree))).unwrap();
    if with_dump {
        s.push_str(&dump(&tree));
    }
    emit(None, &s)
}

fn gmi(instance: &Path, us: &[String]) -> Result<(), Failure> {
    let ip = read_instance(instance)?;
    let eq = to_equality_form(&ip);
    let params = us.iter().map(|u| parse_vector(u, "--u").map(GmiParams)).collect::<Result<Vec<_>, _>>()?;
    let cuts = if params.len() == 1 { vec![gmi_cut(&eq, &params[0])?] } else { sequential_gmi(&eq, &params)? };
    emit(None, &cuts.iter().map(|c| format!("{c}\n")).collect::<String>())
}

fn verify(instance: &Path, trials: usize, seed: u64) -> Result<(), Failure> {
    let lp = read_instance(instance)?.relaxation();
    let witnesses = verify_closed_form(&lp, trials, seed)?;
    let count = |f: &dyn Fn(&Regime) -> bool| witnesses.iter().filter(|w| f(&w.regime)).count();
    let verified = witnesses.iter().filter(|w| w.verified).count();
    let mut s = format!(
        "trials {trials}\nverified {verified}\nunchanged {}\nedge {}\ninfeasible {}\n",
        count(&|r| *r == Regime::Unchanged),
        count(&|r| matches!(r, Regime::ActiveEdge(_))),
        count(&|r| *r == Regime::Infeasible),
    );
    for w in witnesses.iter().filter(|w| !w.verified) {
        writeln!(s, "unverified alpha {} beta {} regime {:?}", w.alpha, w.beta, w.regime).unwrap();
    }
    emit(None, &s)?;
    if verified == trials {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} of {trials} witnesses unverified", trials - verified)))
    }
}

fn arrange(instance: &Path) -> Result<(), Failure> {
    let store = build_arrangement(&read_instance(instance)?.relaxation())?;
    let header = format!(
        "surfaces {}\nhyperplanes {} bound {}\nquadrics {} bound {}\n",
        store.len(),
        store.hyperplane_count,
        store.hyperplane_bound,
        store.quadric_count,
        store.quadric_bound
    );
    emit(None, &(header + &store.dump()))
}

#[allow(clippy::too_many_arguments)]
fn scan(instance: &Path, alpha: &str, lo: &str, hi: &str, res: usize, kappa: usize, out: Option<&Path>, fps: Option<&Path>) -> Result<(), Failure> {
    let ip = read_instance(instance)?;
    let alpha = parse_vector(alpha, "--alpha")?;
    let (lo, hi) = (parse_rational(lo, "--beta-lo")?, parse_rational(hi, "--beta-hi")?);
    let report = line_scan(&ip, &alpha, &lo, &hi, res, &BCConfig { kappa, ..BCConfig::default() })?;
    emit(out, &report.to_csv())?;
    let sidecar = fps.map(Path::to_path_buf).or_else(|| out.map(|p| PathBuf::from(format!("{}.fingerprints.csv", p.display()))));
    match sidecar {
        Some(p) => emit(Some(&p), &report.fingerprint_csv()),
        None => Ok(()),
    }
}

fn run_command(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve { instance, cuts, kappa, dump } => solve(&instance, cuts.as_deref(), kappa, dump),
        Command::Gen { dist, seed, out } => {
            let ip = dist.build()?.sample(seed)?;
            emit(out.as_deref(), &serialize_instance(&ip))
        }
        Command::Gmi { instance, u } => gmi(&instance, &u),
        Command::Sensitivity { action: SensitivityCommand::Verify { instance, trials, seed } } => verify(&instance, trials, seed),
        Command::Sensitivity { action: SensitivityCommand::Arrange { instance } } => arrange(&instance),
        Command::Scan { instance, alpha, beta_lo, beta_hi, res, kappa, out, fingerprints } => {
            scan(&instance, &alpha, &beta_lo, &beta_hi, res, kappa, out.as_deref(), fingerprints.as_deref())
        }
        Command::Sweep { dist, samples, mu_step, cuts_per_instance, kappa, seed, out } => {
            let mut cfg = SweepConfig::new(dist.build()?, samples, seed);
            cfg.mu_step = parse_rational(&mu_step, "--mu-step")?;
            cfg.cuts_per_instance = cuts_per_instance;
            cfg.bc = BCConfig::with_kappa(kappa);
            emit(out.as_deref(), &mu_sweep(&cfg)?.to_csv())
        }
        Command::Gap { dist, u_grid, n_schedule, repetitions, kappa, seed, out } => {
            let grid = read(&u_grid)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| parse_vector(l, "--u-grid").map(GmiParams))
                .collect::<Result<Vec<_>, _>>()?;
            let schedule: Vec<usize> = parse_list(&n_schedule, "--n-schedule")?;
            let report = generalization_gap(&dist.build()?, &grid, &schedule, repetitions, seed, &BCConfig::with_kappa(kappa))?;
            emit(out.as_deref(), &report.to_csv())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
