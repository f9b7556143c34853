//! Symbolic verification kernel for mod-2 Steenrod-algebra computations on
//! conjugation spaces.
//!
//! The crate is layered bottom-up:
//!
//! - [`f2core`]: bit-packed GF(2) linear algebra and binomial coefficients mod 2.
//! - [`polyring`]: graded polynomial quotient rings over F₂ with the total square.
//! - [`steenrod`]: the mod-2 Steenrod algebra, Adem normalization, evaluation.
//! - [`models`]: concrete spaces with involution (projective and sphere products).
//! - [`verify`]: checkers for the conjugation-equation identities.
//! - [`replay`]: re-derivation of the coefficient recursions from scratch.
//! - [`suite`]: the fixed battery of checks run by `verify all`.

pub mod error;
pub mod f2core;
pub mod models;
pub mod polyring;
pub mod replay;
pub mod report;
pub mod steenrod;
pub mod suite;
pub mod verify;

pub use error::{Error, Result};
pub use report::{Verdict, VerificationReport, Witness};
