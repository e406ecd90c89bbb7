use std::collections::BTreeSet;

use super::{check_points, max_dot, BallHull, HullResult, HullShape};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Facet, PolyhedralCone, Polytope};
use crate::linalg::{self, norm};
use crate::lp::{LinearProgram, LpOutcome, Vars};
use crate::EPS_GEO;

/// `min ⟨c, x⟩` subject to `⟨n_j, x⟩ ≥ m_j`; `None` if infeasible,
/// `-∞` if unbounded.
fn lp_min(c: &[f64], rows: &[(&[f64], f64)]) -> Option<f64> {
    let neg: Vec<f64> = c.iter().map(|v| -v).collect();
    let mut lp = LinearProgram::new(c.len(), Vars::Free).maximize(&neg);
    for (n, m) in rows {
        let a: Vec<f64> = n.iter().map(|v| -v).collect();
        lp.push_le(&a, -m);
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Some(-value),
        LpOutcome::Unbounded { .. } => Some(f64::NEG_INFINITY),
        LpOutcome::Infeasible => None,
    }
}

/// The K-hull: intersection of all translates `K + x` containing `A`.
pub fn k_hull_translations(body: &ConvexBody, a: &[Vec<f64>]) -> Result<HullResult> {
    check_points(body.dim(), a)?;
    let d = body.dim();
    match body {
        ConvexBody::Polytope(p) => {
            // X = {x : ⟨u_i, x⟩ ≥ m_i - h_i}
            let m: Vec<f64> = p.facets().iter().map(|f| max_dot(a, &f.normal)).collect();
            let rows: Vec<(&[f64], f64)> = p
                .facets()
                .iter()
                .zip(&m)
                .map(|(f, mi)| (f.normal.as_slice(), mi - f.offset))
                .collect();
            let mut facets = Vec::with_capacity(rows.len());
            for f in p.facets() {
                match lp_min(&f.normal, &rows) {
                    None => return Ok(HullResult::exact(HullShape::WholeSpace { dim: d })),
                    Some(v) => facets.push(Facet::new(f.normal.clone(), f.offset + v)?),
                }
            }
            let hull = Polytope::from_halfspaces(d, &facets)?;
            if hull.is_empty() {
                return Ok(HullResult::exact(HullShape::WholeSpace { dim: d }));
            }
            Ok(HullResult::exact(HullShape::Polytope(hull)))
        }
        ConvexBody::Ball { radius, .. } => {
            if d > 3 {
                return Err(Error::Unsupported("ball K-hulls are implemented for d ≤ 3".into()));
            }
            Ok(match BallHull::new(*radius, a) {
                Some(h) => HullResult::exact(HullShape::BallHull(h)),
                None => HullResult::exact(HullShape::WholeSpace { dim: d }),
            })
        }
        other => Err(Error::Unsupported(format!("K-hull of a {}", other.kind_name()))),
    }
}

/// Active facet sets of all nonempty faces of a polytope.
fn face_catalogue(p: &Polytope) -> BTreeSet<Vec<usize>> {
    let active: Vec<Vec<usize>> = p.vertices().iter().map(|v| p.active_facets(v)).collect();
    let mut faces: BTreeSet<Vec<usize>> = active.iter().cloned().collect();
    for i in 0..active.len() {
        for j in i + 1..active.len() {
            let common: Vec<usize> = active[i].iter().copied().filter(|f| active[j].contains(f)).collect();
            if !common.is_empty() {
                faces.insert(common);
            }
        }
    }
    faces
}

/// Hull under translations and positive scalings of a polytope: the
/// intersection, over all faces `F`, of the translates of the supporting
/// cone at `F` that contain `A`.
pub fn hull_translations_scalings(body: &ConvexBody, a: &[Vec<f64>]) -> Result<HullResult> {
    let ConvexBody::Polytope(p) = body else {
        return Err(Error::Unsupported(format!(
            "translations and scalings hull of a {}",
            body.kind_name()
        )));
    };
    check_points(p.dim(), a)?;
    if let Some(x) = a.iter().find(|x| !p.contains(x)) {
        return Err(Error::NotInBody { violation: p.violation(x) });
    }
    let m: Vec<f64> = p.facets().iter().map(|f| max_dot(a, &f.normal)).collect();
    let mut offsets = vec![f64::INFINITY; p.facets().len()];
    for face in face_catalogue(p) {
        // translates x + S with A ⊆ x + S: ⟨u_j, x⟩ ≥ m_j for j in the face
        let rows: Vec<(&[f64], f64)> = face.iter().map(|&j| (p.facets()[j].normal.as_slice(), m[j])).collect();
        for &i in &face {
            let v = lp_min(&p.facets()[i].normal, &rows).expect("A lies in K");
            offsets[i] = offsets[i].min(v);
        }
    }
    let facets: Vec<Facet> = p
        .facets()
        .iter()
        .zip(&offsets)
        .map(|(f, &h)| Facet::new(f.normal.clone(), h))
        .collect::<Result<_>>()?;
    Ok(HullResult::exact(HullShape::Polytope(Polytope::from_halfspaces(p.dim(), &facets)?)))
}

/// `conv(A)`.
pub fn hull_full_affine(a: &[Vec<f64>]) -> Result<HullResult> {
    let d = a.first().ok_or(Error::EmptySample)?.len();
    check_points(d, a)?;
    Ok(HullResult::exact(HullShape::Polytope(Polytope::from_vertices(a)?)))
}

/// `conv(A ∪ -A)`, the hull for the centred unit ball under `GL_d`.
pub fn hull_linear_ball(a: &[Vec<f64>]) -> Result<HullResult> {
    let d = a.first().ok_or(Error::EmptySample)?.len();
    check_points(d, a)?;
    let mut pts = a.to_vec();
    pts.extend(a.iter().map(|p| linalg::scale(p, -1.0)));
    Ok(HullResult::exact(HullShape::Polytope(Polytope::from_vertices(&pts)?)))
}

/// `cl(pos(A))`.
pub fn positive_hull(a: &[Vec<f64>]) -> Result<HullResult> {
    let d = a.first().ok_or(Error::EmptySample)?.len();
    check_points(d, a)?;
    let rays: Vec<Vec<f64>> = a
        .iter()
        .filter_map(|p| (norm(p) > EPS_GEO).then(|| linalg::scale(p, 1.0 / norm(p))))
        .collect();
    Ok(HullResult::exact(HullShape::Cone(PolyhedralCone::from_rays(d, &rays)?)))
}

/// `cl(pos(A)) ∩ B_1` for `A` in the upper half-ball `{‖x‖ ≤ 1, x_1 ≥ 0}`.
pub fn spherical_hull_halfball(a: &[Vec<f64>]) -> Result<HullResult> {
    let d = a.first().ok_or(Error::EmptySample)?.len();
    check_points(d, a)?;
    let k = ConvexBody::half_ball(d, 1.0);
    if let Some(x) = a.iter().find(|x| !k.contains(x)) {
        return Err(Error::NotInBody { violation: k.violation(x) });
    }
    let HullShape::Cone(cone) = positive_hull(a)?.shape else {
        unreachable!("positive hull is a cone")
    };
    Ok(HullResult::exact(HullShape::ConeInBall { cone, radius: 1.0 }))
}
