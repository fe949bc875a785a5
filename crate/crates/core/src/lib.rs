//! Gaussian-spike and grid simulation of GKP error correction.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod model;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
