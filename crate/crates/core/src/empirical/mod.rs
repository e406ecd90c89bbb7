//! Finite-sample side of the limit theorem: uniform samples, membership in
//! the scaled feasible sets `n𝔛_n`, directional extents, and the Monte Carlo
//! experiments comparing them with the limit cell.

mod expm;
mod experiments;
mod extent;
mod sample;
pub mod stats;

pub use experiments::*;
pub use expm::{matrix_exponential, matrix_exponential_flat};
pub use extent::{directional_extent_empirical, xn_membership, Extent, BISECT_TOL, DEFAULT_S_MAX, SCAN_STEPS};
pub use sample::{uniform_sample, uniform_sample_with, SampleBatch};
