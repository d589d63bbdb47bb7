//! Exact arithmetic, reduction theory and orbit counting for the split
//! orthogonal group acting on `n x n` symmetric matrices, restricted to the
//! reducible hyperplane `W0` (matrices with `b_ij = 0` whenever `i + j < n`).
//!
//! Matrix entries are addressed with 1-based indices `(i, j)` throughout the
//! public API, matching the usual `b_ij` notation.

pub mod archimedean;
pub mod census;
pub mod cli;
pub mod error;
pub mod exactmath;
pub mod group;
pub mod local;
pub mod reduction;
pub mod rep;

pub use error::{Error, Result};
