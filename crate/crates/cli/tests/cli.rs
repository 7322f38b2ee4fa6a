use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bclab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

const TRIANGLE: &str = "ip 2 2 max\nc 1 1\nrow 1 0 LE 1\nrow -1 1 LE 0\nub 1 1\n";

#[test]
fn jeroslow_generate_then_solve() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "j5.txt");
    let g = bclab(&["gen", "--dist", "jeroslow", "--n", "5", "--seed", "1", "--out", &inst]);
    assert_eq!(g.status.code(), Some(0));
    let s = bclab(&["solve", "--instance", &inst]);
    assert_eq!(s.status.code(), Some(0));
    let out = stdout(&s);
    assert!(out.starts_with("status infeasible\n"), "{out}");
    let size: usize = out.lines().find_map(|l| l.strip_prefix("size ")).unwrap().parse().unwrap();
    assert!(size >= 4);

    let cuts = path(&dir, "cuts.txt");
    fs::write(&cuts, "# rescue\ncut 1 1 1 1 1 <= 2\n").unwrap();
    let s = stdout(&bclab(&["solve", "--instance", &inst, "--cuts", &cuts]));
    assert!(s.contains("size 1\n"), "{s}");
}

#[test]
fn capped_solve_still_succeeds() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "j7.txt");
    bclab(&["gen", "--dist", "jeroslow", "--n", "7", "--seed", "2", "--out", &inst]);
    let s = bclab(&["solve", "--instance", &inst, "--kappa", "3"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout(&s).starts_with("status capped\n"));
}

#[test]
fn triangle_verification_passes() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "tri.txt");
    fs::write(&inst, TRIANGLE).unwrap();
    let v = bclab(&["sensitivity", "verify", "--instance", &inst, "--trials", "200", "--seed", "5"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("verified 200\n"));
    let a = bclab(&["sensitivity", "arrange", "--instance", &inst]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).lines().skip(3).all(|l| l.starts_with("surf deg=")));
}

#[test]
fn arrangement_budget_exit_code() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "big.txt");
    bclab(&["gen", "--dist", "packing", "--n", "4", "--seed", "1", "--out", &inst]);
    assert_eq!(bclab(&["sensitivity", "arrange", "--instance", &inst]).status.code(), Some(3));
}

#[test]
fn missing_seed_is_a_usage_error() {
    assert_eq!(bclab(&["sweep", "--dist", "packing", "--samples", "2"]).status.code(), Some(2));
    assert_eq!(bclab(&["gen", "--dist", "jeroslow"]).status.code(), Some(2));
    assert_eq!(bclab(&["solve", "--instance", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn sweep_output_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.csv"), path(&dir, "b.csv"));
    for out in [&a, &b] {
        let r = bclab(&["sweep", "--dist", "packing", "--n", "4", "--samples", "3", "--mu-step", "1/4", "--seed", "9", "--out", out]);
        assert_eq!(r.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("mu,mean_tree_size,sd,n_samples\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn scan_writes_csv_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "j3.txt");
    bclab(&["gen", "--dist", "jeroslow", "--n", "3", "--seed", "4", "--out", &inst]);
    let out = path(&dir, "scan.csv");
    let r = bclab(&["scan", "--instance", &inst, "--alpha", "1,1,1", "--beta-lo", "1", "--beta-hi", "3", "--res", "5", "--out", &out]);
    assert_eq!(r.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().starts_with("t,fingerprint_id\n1,0\n"));
    let side = fs::read_to_string(format!("{out}.fingerprints.csv")).unwrap();
    assert!(side.starts_with("fingerprint_id,fingerprint_hash\n0,"));
    assert!(side.lines().count() >= 3);
}

#[test]
fn gmi_and_gap() {
    let dir = TempDir::new().unwrap();
    let inst = path(&dir, "j3.txt");
    bclab(&["gen", "--dist", "jeroslow", "--n", "3", "--seed", "4", "--out", &inst]);
    let g = bclab(&["gmi", "--instance", &inst, "--u", "1/2"]);
    assert_eq!(g.status.code(), Some(0));
    assert!(stdout(&g).starts_with("cut "));
    assert_eq!(bclab(&["gmi", "--instance", &inst, "--u", "0"]).status.code(), Some(2));

    let grid = path(&dir, "u.txt");
    fs::write(&grid, "# multipliers\n1/3\n1/2\n").unwrap();
    let r = bclab(&["gap", "--dist", "jeroslow", "--n", "5", "--u-grid", &grid, "--n-schedule", "1,2", "--repetitions", "2", "--seed", "3"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r), "n,mean_gap,q90_gap\n1,0.000000,0.000000\n2,0.000000,0.000000\n");
}
