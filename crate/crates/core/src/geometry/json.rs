//! JSON schema for bodies:
//!
//! ```json
//! {"kind": "polytope", "dim": 2, "vertices": [[1,1],[-1,1],[-1,-1],[1,-1]]}
//! {"kind": "polytope", "dim": 2, "facets": [{"normal": [1,0], "offset": 1}, ...]}
//! {"kind": "ball", "dim": 3, "radius": 1.0, "center": [0,0,0]}
//! {"kind": "half_ball", "dim": 2, "radius": 1.0, "axis": [1,0]}
//! {"kind": "half_space", "dim": 2, "normal": [0,1], "offset": 0.5}
//! {"kind": "cone", "dim": 2, "rays": [[1,0],[0,1]]}
//! {"kind": "cone", "dim": 2, "normals": [[-1,0]]}
//! ```
//!
//! `center` and `axis` are optional (origin and `e_1`). A polytope may give
//! vertices, facets, or both; when both are given the vertices win and the
//! facets are recomputed.

use serde::{Deserialize, Serialize};

use super::{ConvexBody, Facet, PolyhedralCone, Polytope};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyJson {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Facet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normals: Option<Vec<Vec<f64>>>,
}

fn field<T>(v: Option<T>, name: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidBody(format!("field `{name}` is required for kind `{kind}`")))
}

fn check_dim(dim: Option<usize>, got: usize, name: &str) -> Result<usize> {
    match dim {
        Some(d) if d != got => Err(Error::InvalidBody(format!(
            "field `{name}` has dimension {got}, but `dim` is {d}"
        ))),
        _ if got == 0 => Err(Error::InvalidBody(format!("field `{name}` has dimension 0"))),
        _ => Ok(got),
    }
}

impl BodyJson {
    pub fn into_body(self) -> Result<ConvexBody> {
        let kind = self.kind.as_str();
        let body = match kind {
            "polytope" => {
                if let Some(vs) = self.vertices {
                    let d = vs.first().map(|v| v.len()).unwrap_or(0);
                    check_dim(self.dim, d, "vertices")?;
                    if vs.iter().any(|v| v.len() != d) {
                        return Err(Error::InvalidBody("field `vertices`: rows differ in length".into()));
                    }
                    ConvexBody::Polytope(Polytope::from_vertices(&vs)?)
                } else {
                    let fs = field(self.facets, "vertices` or `facets", kind)?;
                    let d = fs.first().map(|f| f.normal.len()).unwrap_or(0);
                    check_dim(self.dim, d, "facets")?;
                    let fs = fs
                        .into_iter()
                        .map(|f| Facet::new(f.normal, f.offset))
                        .collect::<Result<Vec<_>>>()?;
                    ConvexBody::Polytope(Polytope::from_halfspaces(d, &fs)?)
                }
            }
            "ball" => {
                let radius = field(self.radius, "radius", kind)?;
                let center = match (self.center, self.dim) {
                    (Some(c), _) => c,
                    (None, Some(d)) => vec![0.0; d],
                    (None, None) => return Err(Error::InvalidBody("ball needs `dim` or `center`".into())),
                };
                check_dim(self.dim, center.len(), "center")?;
                ConvexBody::Ball { radius, center }
            }
            "half_ball" => {
                let radius = field(self.radius, "radius", kind)?;
                let axis = match (self.axis, self.dim) {
                    (Some(a), _) => linalg::normalized(&a)
                        .ok_or_else(|| Error::InvalidBody("field `axis` is zero".into()))?,
                    (None, Some(d)) => linalg::unit(d, 0),
                    (None, None) => return Err(Error::InvalidBody("half_ball needs `dim` or `axis`".into())),
                };
                check_dim(self.dim, axis.len(), "axis")?;
                ConvexBody::HalfBall { radius, axis }
            }
            "half_space" => {
                let normal = field(self.normal, "normal", kind)?;
                check_dim(self.dim, normal.len(), "normal")?;
                ConvexBody::half_space(&normal, field(self.offset, "offset", kind)?)?
            }
            "cone" => {
                if let Some(rays) = self.rays {
                    let d = field(self.dim.or(rays.first().map(|r| r.len())), "dim", kind)?;
                    ConvexBody::Cone(PolyhedralCone::from_rays(d, &rays)?)
                } else {
                    let normals = field(self.normals, "rays` or `normals", kind)?;
                    let d = field(self.dim.or(normals.first().map(|r| r.len())), "dim", kind)?;
                    ConvexBody::Cone(PolyhedralCone::from_normals(d, &normals)?)
                }
            }
            other => {
                return Err(Error::InvalidBody(format!(
                    "field `kind`: unknown body kind `{other}` (expected polytope, ball, half_ball, half_space or cone)"
                )))
            }
        };
        body.validate()?;
        Ok(body)
    }

    pub fn from_body(body: &ConvexBody) -> Self {
        let mut out = BodyJson {
            kind: body.kind_name().to_string(),
            dim: Some(body.dim()),
            vertices: None,
            facets: None,
            radius: None,
            center: None,
            axis: None,
            normal: None,
            offset: None,
            rays: None,
            normals: None,
        };
        match body {
            ConvexBody::Polytope(p) => {
                out.vertices = Some(p.vertices().to_vec());
                out.facets = Some(p.facets().to_vec());
            }
            ConvexBody::Ball { radius, center } => {
                out.radius = Some(*radius);
                out.center = Some(center.clone());
            }
            ConvexBody::HalfBall { radius, axis } => {
                out.radius = Some(*radius);
                out.axis = Some(axis.clone());
            }
            ConvexBody::HalfSpace { normal, offset } => {
                out.normal = Some(normal.clone());
                out.offset = Some(*offset);
            }
            ConvexBody::Cone(c) => {
                out.rays = Some(c.rays().to_vec());
                out.normals = Some(c.normals().to_vec());
            }
        }
        out
    }
}

impl ConvexBody {
    /// Parses and validates a body; errors name the offending field or the
    /// JSON line and column.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: BodyJson = serde_json::from_str(s).map_err(|e| Error::InvalidBody(e.to_string()))?;
        raw.into_body()
    }

    pub fn to_json(&self) -> BodyJson {
        BodyJson::from_body(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_kinds() {
        let bodies = [
            ConvexBody::square(),
            ConvexBody::ball(3, 2.0),
            ConvexBody::half_ball(2, 1.0),
            ConvexBody::half_space(&[0.0, 2.0], 1.0).unwrap(),
            ConvexBody::Cone(PolyhedralCone::from_rays(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()),
        ];
        for b in bodies {
            let s = serde_json::to_string(&b.to_json()).unwrap();
            let back = ConvexBody::from_json_str(&s).unwrap();
            assert_eq!(back.kind_name(), b.kind_name());
            assert_eq!(back.dim(), b.dim());
        }
    }

    #[test]
    fn facets_only_polytope() {
        let s = r#"{"kind":"polytope","facets":[{"normal":[1,0],"offset":1},{"normal":[-1,0],"offset":1},{"normal":[0,1],"offset":1},{"normal":[0,-1],"offset":1}]}"#;
        let b = ConvexBody::from_json_str(s).unwrap();
        match b {
            ConvexBody::Polytope(p) => assert_eq!(p.vertices().len(), 4),
            _ => panic!(),
        }
    }

    #[test]
    fn diagnostics_name_the_problem() {
        let e = ConvexBody::from_json_str(r#"{"kind":"ball","dim":2}"#).unwrap_err();
        assert!(e.to_string().contains("radius"), "{e}");
        let e = ConvexBody::from_json_str(r#"{"kind":"blob"}"#).unwrap_err();
        assert!(e.to_string().contains("kind"), "{e}");
        let e = ConvexBody::from_json_str("{\"kind\":\n\"ball\",,}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = ConvexBody::from_json_str(r#"{"kind":"ball","dim":2,"radius":-1}"#).unwrap_err();
        assert!(e.to_string().contains("radius"), "{e}");
    }
}
