//! Empirical programs built on branch-and-cut: the mu sweep over root cut
//! selection, fingerprint scans through cut parameter space, and the
//! generalization gap estimator.

mod gap;
mod scan;
mod sweep;

pub use gap::{generalization_gap, generalization_gap_with, quantile, GapReport, GapRow, GAP_QUANTILE, HOLDOUT_FACTOR};
pub use scan::{
    fingerprint_hash, gmi_fingerprint, gmi_grid_scan, line_scan, scan_parameter, Breakpoint, CutProbe, ScanReport, BISECTION_DEPTH,
    DEGENERATE, GRID_MAX_M, INVALID, MAX_BREAKPOINTS,
};
pub use sweep::{mean_sd, mu_sweep, SweepConfig, SweepReport, SweepRow, TracePoint};
