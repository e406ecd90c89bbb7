//! Deterministic convex geometry on the supported body representations.

mod body;
mod cone;
pub(crate) mod enumerate;
pub mod json;
mod polytope;

pub use body::{
    minkowski_difference, normal_cone, polar, support_function, supporting_cone, ConvexBody, Direction, Subtrahend,
};
pub use cone::PolyhedralCone;
pub use polytope::{Facet, Polytope};
