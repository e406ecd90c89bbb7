//! Generalised convex hulls, Poisson zero cells in the tangent space of the
//! affine group, and Monte Carlo drivers for their limit theorems.

pub mod empirical;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod linalg;
pub mod lp;
pub mod poisson;
pub mod report;
pub mod rng;
pub mod zero_cell;

pub use error::{Error, Result};
pub use geometry::{ConvexBody, Direction, Facet, PolyhedralCone, Polytope};

/// Tolerance for every geometric equality or containment test.
pub const EPS_GEO: f64 = 1e-9;
