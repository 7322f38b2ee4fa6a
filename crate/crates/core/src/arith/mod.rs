//! Exact arithmetic substrate: rationals, vectors, matrices.

mod matrix;
mod rational;

pub use matrix::{RMatrix, RVector};
pub use rational::{denominator_lcm, rat, ParseRationalError, Rational};
