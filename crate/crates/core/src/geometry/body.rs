use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm, normalized, sub};
use crate::EPS_GEO;

use super::{Facet, PolyhedralCone, Polytope};

/// Unit vector in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(v: &[f64]) -> Result<Self> {
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Degenerate("direction has non-finite entries".into()));
        }
        normalized(v)
            .map(Self)
            .ok_or_else(|| Error::Degenerate("zero direction".into()))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Direction {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// The body representations supported throughout the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    Polytope(Polytope),
    /// Euclidean ball; `center` is the origin unless stated otherwise.
    Ball { radius: f64, center: Vec<f64> },
    /// `{x : ‖x‖ ≤ radius, ⟨x, axis⟩ ≥ 0}` with a unit `axis`.
    HalfBall { radius: f64, axis: Vec<f64> },
    /// `{x : ⟨normal, x⟩ ≤ offset}` with a unit normal.
    HalfSpace { normal: Vec<f64>, offset: f64 },
    Cone(PolyhedralCone),
}

/// The set subtracted in [`minkowski_difference`].
#[derive(Debug, Clone, Copy)]
pub enum Subtrahend<'a> {
    Points(&'a [Vec<f64>]),
    Body(&'a ConvexBody),
}

impl ConvexBody {
    pub fn ball(dim: usize, radius: f64) -> Self {
        Self::Ball {
            radius,
            center: vec![0.0; dim],
        }
    }

    /// Upper half-ball with axis `e_1`.
    pub fn half_ball(dim: usize, radius: f64) -> Self {
        Self::HalfBall {
            radius,
            axis: linalg::unit(dim, 0),
        }
    }

    pub fn half_space(normal: &[f64], offset: f64) -> Result<Self> {
        let f = Facet::new(normal.to_vec(), offset)?;
        Ok(Self::HalfSpace {
            normal: f.normal,
            offset: f.offset,
        })
    }

    /// The square `[-1, 1]^2`.
    pub fn square() -> Self {
        Self::Polytope(Polytope::hypercube(2, 1.0))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope(p) => p.dim(),
            Self::Ball { center, .. } => center.len(),
            Self::HalfBall { axis, .. } => axis.len(),
            Self::HalfSpace { normal, .. } => normal.len(),
            Self::Cone(c) => c.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Polytope(_) => "polytope",
            Self::Ball { .. } => "ball",
            Self::HalfBall { .. } => "half_ball",
            Self::HalfSpace { .. } => "half_space",
            Self::Cone(_) => "cone",
        }
    }

    /// Checks the representation invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Polytope(p) => {
                if p.is_empty() {
                    return Err(Error::InvalidBody("polytope is empty".into()));
                }
                p.check_consistency()
            }
            Self::Ball { radius, center } => {
                if !(radius.is_finite() && *radius > 0.0) || center.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidBody("ball radius must be positive and finite".into()));
                }
                Ok(())
            }
            Self::HalfBall { radius, axis } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidBody("half-ball radius must be positive and finite".into()));
                }
                if (norm(axis) - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidBody("half-ball axis must be a unit vector".into()));
                }
                Ok(())
            }
            Self::HalfSpace { normal, offset } => {
                if (norm(normal) - 1.0).abs() > 1e-12 || !offset.is_finite() {
                    return Err(Error::InvalidBody("half-space needs a unit normal and finite offset".into()));
                }
                Ok(())
            }
            Self::Cone(_) => Ok(()),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Self::Polytope(_) | Self::Ball { .. } | Self::HalfBall { .. })
    }

    /// Signed containment defect: nonpositive exactly on the body (up to
    /// rounding). Not a distance in general, but zero on the boundary.
    pub fn violation(&self, p: &[f64]) -> f64 {
        match self {
            Self::Polytope(poly) => poly.violation(p),
            Self::Ball { radius, center } => linalg::dist(p, center) - radius,
            Self::HalfBall { radius, axis } => (norm(p) - radius).max(-dot(p, axis)),
            Self::HalfSpace { normal, offset } => dot(normal, p) - offset,
            Self::Cone(c) => c.violation(p),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Self::Cone(c) => c.contains(p),
            _ => self.violation(p) <= EPS_GEO,
        }
    }

    /// Origin in the interior, as required of the bodies driving the limit
    /// theory.
    pub fn has_origin_in_interior(&self) -> bool {
        let o = vec![0.0; self.dim()];
        match self {
            Self::Cone(c) => c.is_whole_space(),
            _ => self.violation(&o) < -EPS_GEO,
        }
    }

    /// `max ‖η‖` over boundary points of a bounded body.
    pub fn max_boundary_norm(&self) -> f64 {
        match self {
            Self::Polytope(p) => p.vertices().iter().map(|v| norm(v)).fold(0.0, f64::max),
            Self::Ball { radius, center } => norm(center) + radius,
            Self::HalfBall { radius, .. } => *radius,
            _ => f64::INFINITY,
        }
    }

    /// Unit outer normals active at `v ∈ K`; empty for interior points.
    pub fn active_normals(&self, v: &[f64]) -> Result<Vec<Vec<f64>>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        if !self.contains(v) {
            return Err(Error::NotInBody {
                violation: self.violation(v),
            });
        }
        Ok(match self {
            Self::Polytope(p) => p
                .active_facets(v)
                .into_iter()
                .map(|i| p.facets()[i].normal.clone())
                .collect(),
            Self::Ball { radius, center } => {
                let d = sub(v, center);
                if norm(&d) >= radius - EPS_GEO {
                    vec![linalg::scale(&d, 1.0 / norm(&d))]
                } else {
                    vec![]
                }
            }
            Self::HalfBall { radius, axis } => {
                let mut out = Vec::new();
                if norm(v) >= radius - EPS_GEO {
                    out.push(linalg::scale(v, 1.0 / norm(v)));
                }
                if dot(v, axis) <= EPS_GEO {
                    out.push(linalg::scale(axis, -1.0));
                }
                out
            }
            Self::HalfSpace { normal, offset } => {
                if dot(normal, v) >= offset - EPS_GEO {
                    vec![normal.clone()]
                } else {
                    vec![]
                }
            }
            Self::Cone(c) => c
                .normals()
                .iter()
                .filter(|n| dot(n, v) >= -EPS_GEO * (1.0 + norm(v)))
                .cloned()
                .collect(),
        })
    }
}

/// `sup {⟨x, u⟩ : x ∈ K}`, with `+∞` for unbounded directions.
pub fn support_function(body: &ConvexBody, u: &Direction) -> f64 {
    let u = u.as_slice();
    match body {
        ConvexBody::Polytope(p) => p.support(u),
        ConvexBody::Ball { radius, center } => dot(center, u) + radius,
        ConvexBody::HalfBall { radius, axis } => {
            let a = dot(u, axis);
            if a >= 0.0 {
                *radius
            } else {
                radius * (1.0 - a * a).max(0.0).sqrt()
            }
        }
        ConvexBody::HalfSpace { normal, offset } => {
            if linalg::max_abs_diff(normal, u) <= 1e-12 {
                *offset
            } else {
                f64::INFINITY
            }
        }
        ConvexBody::Cone(c) => c.support(u),
    }
}

/// Polar set `K° = {y : h(K, y) ≤ 1}`.
pub fn polar(body: &ConvexBody) -> Result<ConvexBody> {
    let d = body.dim();
    let origin = vec![0.0; d];
    if !body.contains(&origin) {
        return Err(Error::OriginNotContained);
    }
    match body {
        ConvexBody::Polytope(p) => {
            if p.facets().iter().all(|f| f.offset > EPS_GEO) {
                let pts: Vec<Vec<f64>> = p
                    .facets()
                    .iter()
                    .map(|f| linalg::scale(&f.normal, 1.0 / f.offset))
                    .collect();
                return Ok(ConvexBody::Polytope(Polytope::from_vertices(&pts)?));
            }
            let nonzero: Vec<&Vec<f64>> = p.vertices().iter().filter(|v| norm(v) > EPS_GEO).collect();
            match nonzero.as_slice() {
                [] => Ok(ConvexBody::Cone(PolyhedralCone::whole_space(d))),
                [w] => ConvexBody::half_space(w, 1.0),
                _ => Err(Error::Unsupported(
                    "polar of a polytope with the origin on its boundary is an unbounded polyhedron".into(),
                )),
            }
        }
        ConvexBody::Ball { radius, center } => {
            if norm(center) > EPS_GEO {
                return Err(Error::Unsupported("polar of an off-centre ball".into()));
            }
            Ok(ConvexBody::ball(d, 1.0 / radius))
        }
        ConvexBody::HalfBall { .. } => Err(Error::Unsupported(
            "polar of a half-ball is unbounded and not representable".into(),
        )),
        ConvexBody::HalfSpace { normal, offset } => {
            if *offset > EPS_GEO {
                let tip = linalg::scale(normal, 1.0 / offset);
                Ok(ConvexBody::Polytope(Polytope::from_vertices(&[origin, tip])?))
            } else {
                Ok(ConvexBody::Cone(PolyhedralCone::from_rays(d, &[normal.clone()])?))
            }
        }
        ConvexBody::Cone(c) => Ok(ConvexBody::Cone(c.polar())),
    }
}

/// Supporting cone `cl ∪_{λ>0} λ(K - v)` at `v ∈ K`. A single active normal
/// gives a half-space through the origin.
pub fn supporting_cone(body: &ConvexBody, v: &[f64]) -> Result<ConvexBody> {
    let normals = body.active_normals(v)?;
    match normals.as_slice() {
        [n] => ConvexBody::half_space(n, 0.0),
        _ => Ok(ConvexBody::Cone(PolyhedralCone::from_normals(body.dim(), &normals)?)),
    }
}

/// Normal cone at a boundary point `v`.
pub fn normal_cone(body: &ConvexBody, v: &[f64]) -> Result<PolyhedralCone> {
    let normals = body.active_normals(v)?;
    if normals.is_empty() {
        return Err(Error::NotOnBoundary);
    }
    PolyhedralCone::from_rays(body.dim(), &normals)
}

/// `{x : A + x ⊆ K}`; `None` when empty.
pub fn minkowski_difference(body: &ConvexBody, a: Subtrahend<'_>) -> Result<Option<ConvexBody>> {
    let d = body.dim();
    let sub_support = |u: &[f64]| -> Result<f64> {
        match a {
            Subtrahend::Points(pts) => {
                for p in pts {
                    if p.len() != d {
                        return Err(Error::DimensionMismatch {
                            expected: d,
                            got: p.len(),
                        });
                    }
                }
                Ok(pts.iter().map(|p| dot(p, u)).fold(f64::NEG_INFINITY, f64::max))
            }
            Subtrahend::Body(b) => {
                if b.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: b.dim(),
                    });
                }
                Ok(support_function(b, &Direction::new(u)?))
            }
        }
    };
    match body {
        ConvexBody::Polytope(p) => {
            let mut facets = Vec::with_capacity(p.facets().len());
            for f in p.facets() {
                let s = sub_support(&f.normal)?;
                if s == f64::NEG_INFINITY {
                    return Ok(Some(body.clone()));
                }
                if !s.is_finite() {
                    return Ok(None);
                }
                facets.push(Facet {
                    normal: f.normal.clone(),
                    offset: f.offset - s,
                });
            }
            let out = Polytope::from_halfspaces(d, &facets)?;
            Ok((!out.is_empty()).then_some(ConvexBody::Polytope(out)))
        }
        ConvexBody::Ball { radius, center } => match a {
            Subtrahend::Points(pts) => {
                let Some(first) = pts.first() else {
                    return Ok(Some(body.clone()));
                };
                if pts.iter().all(|p| linalg::max_abs_diff(p, first) <= EPS_GEO) {
                    Ok(Some(ConvexBody::Ball {
                        radius: *radius,
                        center: sub(center, first),
                    }))
                } else {
                    Err(Error::Unsupported(
                        "ball minus several points is an intersection of balls; use hull::feasible_set".into(),
                    ))
                }
            }
            Subtrahend::Body(ConvexBody::Ball {
                radius: s,
                center: c2,
            }) => {
                let shift = sub(center, c2);
                if *s < radius - EPS_GEO {
                    Ok(Some(ConvexBody::Ball {
                        radius: radius - s,
                        center: shift,
                    }))
                } else if *s <= radius + EPS_GEO {
                    Ok(Some(ConvexBody::Polytope(Polytope::from_vertices(&[shift])?)))
                } else {
                    Ok(None)
                }
            }
            Subtrahend::Body(_) => Err(Error::Unsupported(
                "ball minus a non-ball body is not representable".into(),
            )),
        },
        _ => Err(Error::Unsupported(format!(
            "Minkowski difference of a {}",
            body.kind_name()
        ))),
    }
}
