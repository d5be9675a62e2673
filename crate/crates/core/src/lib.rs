//! Multipliers attached to discrete fractional integrals, the exponential
//! sums behind their circle-method analysis, and desk-scale numerical checks
//! of their weak-type and `ℓ^p → ℓ^q` behaviour.
//!
//! The crate is split by role:
//!
//! - [`arith`]: exact number theory (Dirichlet characters, Gauss and Weyl
//!   sums, pentagonal coefficients, binary quadratic forms).
//! - [`farey`]: Farey dissections and the major/minor arc classification.
//! - [`multipliers`]: evaluation of the multipliers, theta functions and
//!   their main-term approximations near rationals.
//! - [`operators`]: discrete fractional integral operators, the product
//!   Stein–Weiss operator and its continuous majorant, ratio scans.
//! - [`weaktype`]: distribution functions and weak-`L^r` estimates of
//!   sampled multipliers.

pub mod arith;
mod error;
pub mod farey;
pub mod multipliers;
pub mod operators;
pub mod summation;
pub mod weaktype;

pub use error::{Error, Result};
pub use num_complex::Complex64;
