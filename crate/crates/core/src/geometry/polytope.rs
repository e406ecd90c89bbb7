use rand::Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::{cone_h_to_v, push_unique};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm, sub};
use crate::EPS_GEO;

/// Half-space `{x : ⟨normal, x⟩ ≤ offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    /// Normalises `normal`; fails on a zero normal.
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let n = norm(&normal);
        if !(n > 1e-300) || !offset.is_finite() {
            return Err(Error::Degenerate("facet normal must be nonzero and finite".into()));
        }
        Ok(Self {
            normal: linalg::scale(&normal, 1.0 / n),
            offset: offset / n,
        })
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

/// Bounded convex polytope kept in both vertex and facet form.
///
/// Lower-dimensional polytopes are allowed: their facet list then contains
/// opposite pairs cutting out the affine hull. An empty vertex list is the
/// empty set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
}

impl Polytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Axis-parallel cube `[-half, half]^dim`.
    pub fn hypercube(dim: usize, half: f64) -> Self {
        let mut facets = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1.0, -1.0] {
                facets.push(Facet {
                    normal: linalg::scale(&linalg::unit(dim, i), s),
                    offset: half,
                });
            }
        }
        let vertices = (0..1usize << dim)
            .map(|mask| {
                (0..dim)
                    .map(|i| if mask >> i & 1 == 1 { half } else { -half })
                    .collect()
            })
            .collect();
        Self {
            dim,
            vertices,
            facets,
        }
    }

    /// Convex hull of a finite point set.
    pub fn from_vertices(points: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptySample);
        };
        let dim = first.len();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Degenerate("non-finite coordinate".into()));
            }
        }
        let candidates = if dim == 2 {
            monotone_chain(points)
        } else {
            dedup_points(points)
        };

        // Facets of P are generators of {(a, c) : ⟨a, v⟩ + c ≤ 0 for all v}.
        let homog: Vec<Vec<f64>> = candidates
            .iter()
            .map(|v| {
                let mut g = v.clone();
                g.push(1.0);
                g
            })
            .collect();
        let dual = cone_h_to_v(&homog, dim + 1);
        let mut facets: Vec<Facet> = Vec::new();
        for g in dual.generators() {
            let (a, c) = g.split_at(dim);
            if norm(a) < 1e-12 {
                continue;
            }
            let f = Facet::new(a.to_vec(), -c[0])?;
            let touches = candidates
                .iter()
                .any(|v| f.value(v).abs() <= EPS_GEO * (1.0 + f.offset.abs()));
            if touches {
                push_facet(&mut facets, f);
            }
        }
        let vertices = extreme_points(&candidates, &facets, dim);
        Ok(Self {
            dim,
            vertices,
            facets,
        })
    }

    /// Intersection of half-spaces. Fails if the intersection is unbounded;
    /// returns an empty polytope if it is empty.
    pub fn from_halfspaces(dim: usize, facets: &[Facet]) -> Result<Self> {
        for f in facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
        }
        // Homogenise: {(x, s) : ⟨u_i, x⟩ - h_i s ≤ 0, s ≥ 0}.
        let mut normals: Vec<Vec<f64>> = facets
            .iter()
            .map(|f| {
                let mut n = f.normal.clone();
                n.push(-f.offset);
                n
            })
            .collect();
        let mut s_ge_0 = vec![0.0; dim + 1];
        s_ge_0[dim] = -1.0;
        normals.push(s_ge_0);
        let vrep = cone_h_to_v(&normals, dim + 1);
        if !vrep.lineality.is_empty() {
            return Err(Error::InvalidBody("half-space system is unbounded".into()));
        }
        let mut vertices: Vec<Vec<f64>> = Vec::new();
        for r in &vrep.rays {
            let s = r[dim];
            if s <= 1e-12 {
                return Err(Error::InvalidBody("half-space system is unbounded".into()));
            }
            let v: Vec<f64> = r[..dim].iter().map(|x| x / s).collect();
            push_unique(&mut vertices, v, 1e-9);
        }
        let mut kept: Vec<Facet> = Vec::new();
        if !vertices.is_empty() {
            for f in facets {
                let f = Facet::new(f.normal.clone(), f.offset)?;
                let tight = vertices
                    .iter()
                    .any(|v| f.value(v).abs() <= EPS_GEO * (1.0 + f.offset.abs()));
                if tight {
                    push_facet(&mut kept, f);
                }
            }
        } else {
            kept = facets.to_vec();
        }
        Ok(Self {
            dim,
            vertices,
            facets: kept,
        })
    }

    /// `max ⟨v, u⟩` over vertices; `-∞` for the empty polytope.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest facet violation `max ⟨u_i, p⟩ - h_i`.
    pub fn violation(&self, p: &[f64]) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        self.facets
            .iter()
            .map(|f| f.value(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.violation(p) <= EPS_GEO
    }

    pub fn translate(&self, v: &[f64]) -> Self {
        Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|x| linalg::add(x, v)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal.clone(),
                    offset: f.offset + dot(&f.normal, v),
                })
                .collect(),
        }
    }

    /// Indices of vertices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        let f = &self.facets[i];
        let tol = EPS_GEO * (1.0 + f.offset.abs());
        (0..self.vertices.len())
            .filter(|&k| f.value(&self.vertices[k]).abs() <= tol)
            .collect()
    }

    /// Indices of facets active at `p`.
    pub fn active_facets(&self, p: &[f64]) -> Vec<usize> {
        (0..self.facets.len())
            .filter(|&i| self.facets[i].value(p).abs() <= EPS_GEO * (1.0 + self.facets[i].offset.abs()))
            .collect()
    }

    pub fn affine_dim(&self) -> usize {
        match self.vertices.split_first() {
            None => 0,
            Some((v0, rest)) => {
                let diffs: Vec<Vec<f64>> = rest.iter().map(|v| sub(v, v0)).collect();
                linalg::rank(&diffs, self.dim, 1e-10)
            }
        }
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim() == self.dim
    }

    pub fn centroid_of_vertices(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            linalg::axpy(&mut c, 1.0, v);
        }
        linalg::scale(&c, 1.0 / self.vertices.len().max(1) as f64)
    }

    /// `(d-1)`-volume of facet `i` (for `d ≤ 3`).
    pub fn facet_area(&self, i: usize) -> Result<f64> {
        let pts: Vec<Vec<f64>> = self
            .facet_vertices(i)
            .into_iter()
            .map(|k| self.vertices[k].clone())
            .collect();
        match self.dim {
            1 => Ok(1.0),
            2 => {
                let mut best = 0.0f64;
                for a in &pts {
                    for b in &pts {
                        best = best.max(linalg::dist(a, b));
                    }
                }
                Ok(best)
            }
            3 => Ok(fan_triangles(&pts, &self.facets[i].normal)
                .iter()
                .map(|t| t.3)
                .sum()),
            d => Err(Error::Unsupported(format!("facet areas in dimension {d}"))),
        }
    }

    pub fn surface_area(&self) -> Result<f64> {
        (0..self.facets.len()).map(|i| self.facet_area(i)).sum()
    }

    /// Volume from the cone decomposition `V = (1/d) Σ h_i |F_i|`.
    pub fn volume(&self) -> Result<f64> {
        if !self.is_full_dimensional() {
            return Ok(0.0);
        }
        let mut v = 0.0;
        for (i, f) in self.facets.iter().enumerate() {
            v += f.offset * self.facet_area(i)?;
        }
        Ok(v / self.dim as f64)
    }

    /// Uniform point on facet `i` (for `d ≤ 3`).
    pub fn sample_facet<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Vec<f64> {
        let pts: Vec<Vec<f64>> = self
            .facet_vertices(i)
            .into_iter()
            .map(|k| self.vertices[k].clone())
            .collect();
        match self.dim {
            1 => pts[0].clone(),
            2 => {
                let (a, b) = farthest_pair(&pts);
                let s: f64 = rng.random();
                a.iter().zip(&b).map(|(x, y)| x + s * (y - x)).collect()
            }
            _ => {
                let tris = fan_triangles(&pts, &self.facets[i].normal);
                let total: f64 = tris.iter().map(|t| t.3).sum();
                let mut pick = rng.random::<f64>() * total;
                let mut chosen = &tris[tris.len() - 1];
                for t in &tris {
                    if pick < t.3 {
                        chosen = t;
                        break;
                    }
                    pick -= t.3;
                }
                let (mut r1, mut r2): (f64, f64) = (rng.random(), rng.random());
                if r1 + r2 > 1.0 {
                    r1 = 1.0 - r1;
                    r2 = 1.0 - r2;
                }
                (0..3)
                    .map(|k| chosen.0[k] + r1 * (chosen.1[k] - chosen.0[k]) + r2 * (chosen.2[k] - chosen.0[k]))
                    .collect()
            }
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    /// Same vertex set up to ordering, within `tol`.
    pub fn same_vertices(&self, other: &Polytope, tol: f64) -> bool {
        let covers = |a: &[Vec<f64>], b: &[Vec<f64>]| {
            a.iter()
                .all(|v| b.iter().any(|w| linalg::max_abs_diff(v, w) <= tol))
        };
        covers(&self.vertices, &other.vertices) && covers(&other.vertices, &self.vertices)
    }

    /// Checks the V/H consistency invariants within `EPS_GEO`.
    pub fn check_consistency(&self) -> Result<()> {
        for v in &self.vertices {
            let viol = self.violation(v);
            if viol > EPS_GEO * 10.0 {
                return Err(Error::InvalidBody(format!("vertex violates a facet by {viol:.3e}")));
            }
        }
        for f in &self.facets {
            let h = self.support(&f.normal);
            if (h - f.offset).abs() > 1e-8 * (1.0 + f.offset.abs()) {
                return Err(Error::InvalidBody(format!(
                    "facet offset {} differs from vertex support {h}",
                    f.offset
                )));
            }
        }
        Ok(())
    }
}

fn push_facet(facets: &mut Vec<Facet>, f: Facet) {
    let dup = facets.iter().any(|g| {
        linalg::max_abs_diff(&g.normal, &f.normal) <= 1e-9 && (g.offset - f.offset).abs() <= 1e-9 * (1.0 + f.offset.abs())
    });
    if !dup {
        facets.push(f);
    }
}

fn dedup_points(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for p in points {
        push_unique(&mut out, p.clone(), 1e-12);
    }
    out
}

/// Points whose active facets have full rank, i.e. the vertices.
fn extreme_points(candidates: &[Vec<f64>], facets: &[Facet], dim: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for p in candidates {
        let active: Vec<Vec<f64>> = facets
            .iter()
            .filter(|f| f.value(p).abs() <= EPS_GEO * (1.0 + f.offset.abs()))
            .map(|f| f.normal.clone())
            .collect();
        if linalg::rank(&active, dim, 1e-9) == dim {
            push_unique(&mut out, p.clone(), 1e-9);
        }
    }
    out
}

/// Andrew's monotone chain; returns the strict hull vertices.
fn monotone_chain(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts = dedup_points(points);
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &[f64], a: &[f64], b: &[f64]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<Vec<f64>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec<f64>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 1e-14 {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    dedup_points(&hull)
}

fn farthest_pair(pts: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let mut best = (pts[0].clone(), pts[0].clone(), -1.0);
    for a in pts {
        for b in pts {
            let d = linalg::dist(a, b);
            if d > best.2 {
                best = (a.clone(), b.clone(), d);
            }
        }
    }
    (best.0, best.1)
}

type Triangle = (Vec<f64>, Vec<f64>, Vec<f64>, f64);

/// Fan triangulation of a planar convex polygon in `R^3`, with areas.
fn fan_triangles(pts: &[Vec<f64>], normal: &[f64]) -> Vec<Triangle> {
    if pts.len() < 3 {
        return Vec::new();
    }
    let c: Vec<f64> = (0..3)
        .map(|k| pts.iter().map(|p| p[k]).sum::<f64>() / pts.len() as f64)
        .collect();
    let basis = linalg::orthogonal_complement(&[normal.to_vec()], 3);
    let (e1, e2) = (&basis[0], &basis[1]);
    let mut ordered: Vec<(f64, &Vec<f64>)> = pts
        .iter()
        .map(|p| {
            let d = sub(p, &c);
            (dot(&d, e2).atan2(dot(&d, e1)), p)
        })
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let p0 = ordered[0].1;
    ordered
        .windows(2)
        .skip(1)
        .map(|w| {
            let (a, b) = (w[0].1, w[1].1);
            let area = 0.5 * norm(&linalg::cross3(&sub(a, p0), &sub(b, p0)));
            (p0.clone(), a.clone(), b.clone(), area)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replicate_rng;
    use proptest::prelude::*;

    #[test]
    fn square_from_vertices_has_four_facets() {
        let sq = Polytope::from_vertices(&[
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![0.0, 0.5],
        ])
        .unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        sq.check_consistency().unwrap();
        assert!((sq.volume().unwrap() - 4.0).abs() < 1e-12);
        assert!((sq.surface_area().unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn cube_measures() {
        let c = Polytope::hypercube(3, 1.0);
        c.check_consistency().unwrap();
        assert!((c.volume().unwrap() - 8.0).abs() < 1e-12);
        assert!((c.surface_area().unwrap() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn halfspaces_round_trip() {
        let c = Polytope::hypercube(3, 1.0);
        let back = Polytope::from_halfspaces(3, c.facets()).unwrap();
        assert!(back.same_vertices(&c, 1e-9));
        let again = Polytope::from_vertices(back.vertices()).unwrap();
        assert_eq!(again.facets().len(), 6);
    }

    #[test]
    fn segment_in_plane() {
        let s = Polytope::from_vertices(&[vec![-1.0, 0.0], vec![1.0, 0.0], vec![0.2, 0.0]]).unwrap();
        assert_eq!(s.vertices().len(), 2);
        assert_eq!(s.affine_dim(), 1);
        assert!(s.contains(&[0.5, 0.0]));
        assert!(!s.contains(&[0.5, 1e-6]));
        assert!(!s.contains(&[1.1, 0.0]));
        s.check_consistency().unwrap();
    }

    #[test]
    fn single_point() {
        let p = Polytope::from_vertices(&[vec![0.3, -0.2, 0.1]]).unwrap();
        assert_eq!(p.vertices().len(), 1);
        assert!(p.contains(&[0.3, -0.2, 0.1]));
        assert!(!p.contains(&[0.3, -0.2, 0.1 + 1e-6]));
    }

    #[test]
    fn unbounded_and_empty_systems() {
        let half = [Facet::new(vec![1.0, 0.0], 1.0).unwrap()];
        assert!(Polytope::from_halfspaces(2, &half).is_err());
        let empty = [
            Facet::new(vec![1.0], -1.0).unwrap(),
            Facet::new(vec![-1.0], -1.0).unwrap(),
        ];
        assert!(Polytope::from_halfspaces(1, &empty).unwrap().is_empty());
    }

    #[test]
    fn support_matches_brute_force() {
        let p = Polytope::from_vertices(&[vec![2.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]]).unwrap();
        assert_eq!(p.support(&[1.0, 0.0]), 2.0);
    }

    #[test]
    fn facet_sampling_stays_on_facet() {
        let c = Polytope::hypercube(3, 1.0);
        let mut rng = replicate_rng(3, 0);
        for i in 0..c.facets().len() {
            for _ in 0..20 {
                let p = c.sample_facet(i, &mut rng);
                assert!(c.facets()[i].value(&p).abs() < 1e-12);
                assert!(c.contains(&p));
            }
        }
    }

    proptest! {
        #[test]
        fn random_hulls_are_consistent(pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 4..14)) {
            let p = Polytope::from_vertices(&pts).unwrap();
            p.check_consistency().unwrap();
            for q in &pts {
                prop_assert!(p.violation(q) <= 1e-9);
            }
        }

        #[test]
        fn planar_hulls_are_consistent(pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 2), 1..30)) {
            let p = Polytope::from_vertices(&pts).unwrap();
            p.check_consistency().unwrap();
            for q in &pts {
                prop_assert!(p.violation(q) <= 1e-9);
            }
        }
    }
}
