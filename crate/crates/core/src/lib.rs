//! Exact-rational branch-and-cut laboratory.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: exact rationals, vectors, matrices, Bareiss determinants.
//! - [`lp`]: linear programs and a two-phase primal simplex with Bland's rule.
//! - [`ip`]: integer programs, brute-force enumeration, generators, text format.
//! - [`cuts`]: Gomory mixed-integer and Chvátal–Gomory cuts, scoring, selection.
//! - [`bc`]: branch-and-cut with product-scoring branching and tree fingerprints.
//! - [`sensitivity`]: closed-form LP optima under added cuts and the surfaces
//!   that partition cut-parameter space.
//! - [`experiments`]: cut-selection sweeps, parameter scans, generalization gap.

pub mod arith;
pub mod bc;
pub mod cuts;
pub mod error;
pub mod experiments;
pub mod ip;
pub mod lp;
pub mod sensitivity;

pub use error::{Error, Result};
