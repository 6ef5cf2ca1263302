//! Quantum discord under projective and general measurements, with numerical
//! checks of the conditions under which discord vanishes or saturates.

// Comparisons are written as `!(x <= tol)` so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod discord;
pub mod entropy;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod measurements;
pub mod optim;
pub mod params;
pub mod random;
pub mod states;
pub mod theorems;

pub use error::{Error, Result};
