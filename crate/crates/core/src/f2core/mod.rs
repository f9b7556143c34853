//! Exact arithmetic over GF(2): bit-packed vectors and matrices with
//! Gaussian elimination, and binomial coefficients mod 2.

mod binom;
mod matrix;

pub use binom::{binom_mod2, pick_k};
pub use matrix::{solve_linear, F2Matrix, F2Vector, LinearSolution, SolveReport};
