//! `(K, H)`-hulls: the intersection of all images `g(K + x)`, `(x, g) ∈ H`,
//! that contain a finite set `A`.

mod ball;
mod closed_form;
mod oracle;

pub use ball::{BallHull, BallMembership};
pub use closed_form::{
    hull_full_affine, hull_linear_ball, hull_translations_scalings, k_hull_translations, positive_hull,
    spherical_hull_halfball,
};
pub use oracle::{feasible_set, generic_hull_membership, FeasibleSet, OracleAnswer, OracleBudget, Transform};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::json::BodyJson;
use crate::geometry::{support_function, ConvexBody, Direction, PolyhedralCone, Polytope};
use crate::linalg::{self, dot, norm};
use crate::EPS_GEO;

/// Translation part `𝕋` of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Translations {
    Full,
    Zero,
    /// Span of the given vectors.
    Subspace(Vec<Vec<f64>>),
}

/// Linear part `𝔾` of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearPart {
    Identity,
    PositiveScalings,
    ScalingsRotations,
    SpecialOrthogonal,
    GeneralLinear,
    DiagonalPositive,
}

/// `H = 𝕋 × 𝔾`; always contains `(0, I)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFamily {
    pub translations: Translations,
    pub linear: LinearPart,
}

/// Names accepted by [`HullFamily::from_name`].
pub const FAMILY_NAMES: &[&str] = &[
    "identity",
    "k-hull",
    "translations-scalings",
    "full-affine",
    "linear-ball",
    "conic",
    "spherical",
];

impl HullFamily {
    pub fn new(translations: Translations, linear: LinearPart) -> Self {
        Self { translations, linear }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        use LinearPart::*;
        let (t, g) = match name {
            "identity" => (Translations::Zero, Identity),
            "k-hull" => (Translations::Full, Identity),
            "translations-scalings" => (Translations::Full, PositiveScalings),
            "full-affine" => (Translations::Full, GeneralLinear),
            "linear-ball" => (Translations::Zero, GeneralLinear),
            "conic" | "spherical" => (Translations::Zero, SpecialOrthogonal),
            other => {
                return Err(Error::param(
                    "family",
                    format!("unknown family `{other}` (expected one of {})", FAMILY_NAMES.join(", ")),
                ))
            }
        };
        Ok(Self::new(t, g))
    }

    /// Number of translation parameters.
    pub(crate) fn translation_dim(&self, d: usize) -> usize {
        match &self.translations {
            Translations::Full => d,
            Translations::Zero => 0,
            Translations::Subspace(b) => b.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exactness {
    Exact,
    /// Membership answers are certified up to `eps`.
    Approximate { eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum HullShape {
    Polytope(Polytope),
    Cone(PolyhedralCone),
    /// `cone ∩ B(0, radius)`.
    ConeInBall { cone: PolyhedralCone, radius: f64 },
    /// Intersection of all balls of the given radius containing the points.
    BallHull(BallHull),
    /// `K` itself.
    Body(ConvexBody),
    /// No image of `K` contains `A`; the hull is `R^d` by convention.
    WholeSpace { dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HullResult {
    pub shape: HullShape,
    pub exactness: Exactness,
}

impl HullResult {
    pub(crate) fn exact(shape: HullShape) -> Self {
        Self {
            shape,
            exactness: Exactness::Exact,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            HullShape::Polytope(p) => p.dim(),
            HullShape::Cone(c) | HullShape::ConeInBall { cone: c, .. } => c.dim(),
            HullShape::BallHull(b) => b.dim(),
            HullShape::Body(b) => b.dim(),
            HullShape::WholeSpace { dim } => *dim,
        }
    }

    pub fn is_whole_space(&self) -> bool {
        matches!(self.shape, HullShape::WholeSpace { .. })
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match &self.shape {
            HullShape::Polytope(p) => Some(p),
            _ => None,
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match &self.shape {
            HullShape::Polytope(poly) => poly.contains(p),
            HullShape::Cone(c) => c.contains(p),
            HullShape::ConeInBall { cone, radius } => cone.contains(p) && norm(p) <= radius + EPS_GEO,
            HullShape::BallHull(b) => b.contains(p),
            HullShape::Body(b) => b.contains(p),
            HullShape::WholeSpace { .. } => true,
        }
    }

    /// Support function where it has a closed form.
    pub fn support(&self, u: &[f64]) -> Option<f64> {
        match &self.shape {
            HullShape::Polytope(p) => Some(p.support(u)),
            HullShape::Cone(c) => Some(c.support(u)),
            HullShape::Body(b) => Direction::new(u).ok().map(|u| support_function(b, &u)),
            HullShape::WholeSpace { .. } => Some(if norm(u) == 0.0 { 0.0 } else { f64::INFINITY }),
            _ => None,
        }
    }

    /// Unit generators of the spherical part `hull ∩ S^{d-1}` of a conic
    /// result.
    pub fn spherical_part(&self) -> Option<Vec<Vec<f64>>> {
        match &self.shape {
            HullShape::Cone(c) | HullShape::ConeInBall { cone: c, .. } => Some(c.unit_rays()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = match &self.shape {
            HullShape::Polytope(p) => {
                serde_json::to_value(BodyJson::from_body(&ConvexBody::Polytope(p.clone()))).expect("plain data")
            }
            HullShape::Cone(c) => {
                serde_json::to_value(BodyJson::from_body(&ConvexBody::Cone(c.clone()))).expect("plain data")
            }
            HullShape::ConeInBall { cone, radius } => json!({
                "kind": "cone_in_ball",
                "dim": cone.dim(),
                "rays": cone.rays(),
                "normals": cone.normals(),
                "radius": radius,
            }),
            HullShape::Body(b) => serde_json::to_value(BodyJson::from_body(b)).expect("plain data"),
            HullShape::BallHull(b) => json!({
                "kind": "ball_hull",
                "dim": b.dim(),
                "radius": b.radius(),
                "points": b.points(),
            }),
            HullShape::WholeSpace { dim } => json!({ "kind": "whole_space", "dim": dim }),
        };
        let exactness = match self.exactness {
            Exactness::Exact => json!("exact"),
            Exactness::Approximate { eps } => json!({ "approximate": eps }),
        };
        v.as_object_mut().expect("object").insert("exactness".into(), exactness);
        v
    }
}

pub(crate) fn check_points(dim: usize, a: &[Vec<f64>]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptySample);
    }
    for p in a {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("points", "coordinates must be finite"));
        }
    }
    Ok(())
}

/// Closed-form hull for the families that have one.
pub fn compute_hull(body: &ConvexBody, family: &HullFamily, a: &[Vec<f64>]) -> Result<HullResult> {
    use LinearPart::*;
    check_points(body.dim(), a)?;
    match (&family.translations, family.linear, body) {
        (Translations::Zero, Identity, _) => Ok(HullResult::exact(if a.iter().all(|p| body.contains(p)) {
            HullShape::Body(body.clone())
        } else {
            HullShape::WholeSpace { dim: body.dim() }
        })),
        (Translations::Full, Identity, _) => k_hull_translations(body, a),
        (Translations::Full, PositiveScalings, ConvexBody::Polytope(_)) => hull_translations_scalings(body, a),
        (Translations::Full, PositiveScalings, ConvexBody::Ball { .. }) => {
            if !a.iter().all(|p| body.contains(p)) {
                return Err(Error::param("points", "must lie in K"));
            }
            hull_full_affine(a)
        }
        (Translations::Full, ScalingsRotations | GeneralLinear, _) => {
            if !body.is_bounded() && !matches!(body, ConvexBody::HalfSpace { .. }) {
                return Err(Error::Unsupported("full-affine hull needs a body with interior".into()));
            }
            hull_full_affine(a)
        }
        (Translations::Zero, GeneralLinear, ConvexBody::Ball { center, .. }) if norm(center) == 0.0 => {
            hull_linear_ball(a)
        }
        (Translations::Zero, SpecialOrthogonal, ConvexBody::HalfSpace { offset, .. }) if *offset == 0.0 => {
            if !a.iter().all(|p| body.contains(p)) {
                return Err(Error::param("points", "must lie in K"));
            }
            positive_hull(a)
        }
        (Translations::Zero, SpecialOrthogonal, ConvexBody::HalfBall { radius, axis }) => {
            if (radius - 1.0).abs() > 1e-12 || linalg::max_abs_diff(axis, &linalg::unit(axis.len(), 0)) > 1e-12 {
                return Err(Error::Unsupported("spherical hull needs the unit half-ball with axis e_1".into()));
            }
            spherical_hull_halfball(a)
        }
        _ => Err(Error::Unsupported(format!(
            "no closed form for this family with a {}; use the generic oracle",
            body.kind_name()
        ))),
    }
}

/// `max_i ⟨p_i, u⟩` over a point list.
pub(crate) fn max_dot(a: &[Vec<f64>], u: &[f64]) -> f64 {
    a.iter().map(|p| dot(p, u)).fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests;
