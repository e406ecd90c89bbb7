//! K-hull of a finite set for a ball `K = B(c, r)` under translations.
//!
//! The admissible centres form `X = ∩_a B(a, r)` and the hull is
//! `∩_{z ∈ X} B(z, r) = {y : max_{z ∈ X} ‖y - z‖ ≤ r}`. Both the support
//! function of `X` and the farthest point of `X` from `y` are evaluated
//! exactly from the boundary structure of `X`: its corners, the spherical
//! pieces of `∂B(a_i, r)` and (in 3D) the circular arcs between them. On each
//! piece the distance from `y` peaks at the piece's far point or on its
//! boundary.

use crate::linalg::{self, dist, dot, norm};

#[derive(Debug, Clone, PartialEq)]
pub struct BallHull {
    radius: f64,
    points: Vec<Vec<f64>>,
    /// Corners of `X`: pairwise circle points in 2D, triple points in 3D.
    vertices: Vec<Vec<f64>>,
    /// Spheres `∂B(a_i, r)` carrying part of `∂X`.
    singles: Vec<usize>,
    /// Circles `∂B(a_i, r) ∩ ∂B(a_j, r)` carrying part of `∂X` (3D).
    pairs: Vec<(usize, usize)>,
}

/// Result of a membership query: `max_{z ∈ X} ‖y - z‖` with a maximiser.
/// When `y` is outside, the maximiser is a centre whose ball contains `A`
/// but not `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMembership {
    pub inside: bool,
    pub max_distance: f64,
    pub farthest: Vec<f64>,
}

fn tol(r: f64) -> f64 {
    1e-9 * (1.0 + r)
}

/// Circle `∂B(a, r) ∩ ∂B(b, r)`: centre, radius and the unit axis.
fn circle(a: &[f64], b: &[f64], r: f64) -> Option<(Vec<f64>, f64, Vec<f64>)> {
    let w = linalg::sub(b, a);
    let l = norm(&w);
    if l == 0.0 {
        return None;
    }
    let rho2 = r * r - l * l / 4.0;
    if rho2 < -tol(r) * r {
        return None;
    }
    let m = linalg::scale(&linalg::add(a, b), 0.5);
    Some((m, rho2.max(0.0).sqrt(), linalg::scale(&w, 1.0 / l)))
}

/// Point of the circle maximising `⟨·, u⟩`; `None` if `u` is parallel to
/// the axis (then every point is a maximiser).
fn circle_argmax(m: &[f64], rho: f64, w: &[f64], u: &[f64]) -> Option<Vec<f64>> {
    let mut p = u.to_vec();
    linalg::axpy(&mut p, -dot(u, w), w);
    let p = linalg::normalized(&p)?;
    Some(linalg::add(m, &linalg::scale(&p, rho)))
}

fn any_perpendicular(w: &[f64]) -> Vec<f64> {
    let k = (0..w.len())
        .min_by(|&i, &j| w[i].abs().total_cmp(&w[j].abs()))
        .expect("nonempty");
    let mut e = linalg::unit(w.len(), k);
    linalg::axpy(&mut e, -w[k], w);
    linalg::normalized(&e).expect("independent of w")
}

/// The 0, 1 or 2 points at distance `r` from three centres in `R^3`.
fn triple_points(a: &[f64], b: &[f64], c: &[f64], r: f64) -> Vec<Vec<f64>> {
    let ab = linalg::sub(b, a);
    let ac = linalg::sub(c, a);
    let n = linalg::cross3(&ab, &ac);
    let nn = dot(&n, &n);
    if nn < 1e-24 {
        return Vec::new();
    }
    // circumcentre of the triangle, then move along the normal
    let ab2 = dot(&ab, &ab);
    let ac2 = dot(&ac, &ac);
    let t1 = linalg::scale(&linalg::cross3(&n, &ab), ac2);
    let t2 = linalg::scale(&linalg::cross3(&ac, &n), ab2);
    let off = linalg::scale(&linalg::add(&t1, &t2), 1.0 / (2.0 * nn));
    let cc = linalg::add(a, &off);
    let h2 = r * r - dot(&off, &off);
    if h2 < -tol(r) * r {
        return Vec::new();
    }
    let h = h2.max(0.0).sqrt();
    let nu = linalg::scale(&n, 1.0 / nn.sqrt());
    vec![linalg::add(&cc, &linalg::scale(&nu, h)), linalg::add(&cc, &linalg::scale(&nu, -h))]
}

impl BallHull {
    /// `None` when no ball of radius `r` contains all points.
    pub fn new(radius: f64, points: &[Vec<f64>]) -> Option<Self> {
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for p in points {
            if !pts.iter().any(|q| dist(p, q) <= 1e-12 * (1.0 + norm(p))) {
                pts.push(p.clone());
            }
        }
        let d = pts.first()?.len();
        let r = radius;
        let feasible = |z: &[f64]| pts.iter().all(|a| dist(z, a) <= r + tol(r));
        let m = pts.len();

        let mut vertices: Vec<Vec<f64>> = Vec::new();
        let mut singles: Vec<usize> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let push_single = |s: &mut Vec<usize>, i: usize| {
            if !s.contains(&i) {
                s.push(i);
            }
        };
        match d {
            1 => {
                let lo = pts.iter().map(|a| a[0]).fold(f64::NEG_INFINITY, f64::max) - r;
                let hi = pts.iter().map(|a| a[0]).fold(f64::INFINITY, f64::min) + r;
                if lo > hi + tol(r) {
                    return None;
                }
                vertices = vec![vec![lo.min(hi)], vec![hi.max(lo)]];
            }
            2 => {
                for i in 0..m {
                    for j in i + 1..m {
                        let Some((c, rho, w)) = circle(&pts[i], &pts[j], r) else { continue };
                        let perp = vec![-w[1], w[0]];
                        for s in [1.0, -1.0] {
                            let z = linalg::add(&c, &linalg::scale(&perp, s * rho));
                            if feasible(&z) {
                                push_single(&mut singles, i);
                                push_single(&mut singles, j);
                                linalg_push_unique(&mut vertices, z);
                            }
                        }
                    }
                }
            }
            3 => {
                for i in 0..m {
                    for j in i + 1..m {
                        for k in j + 1..m {
                            for z in triple_points(&pts[i], &pts[j], &pts[k], r) {
                                if feasible(&z) {
                                    for (p, q) in [(i, j), (i, k), (j, k)] {
                                        if !pairs.contains(&(p, q)) {
                                            pairs.push((p, q));
                                        }
                                    }
                                    linalg_push_unique(&mut vertices, z);
                                }
                            }
                        }
                    }
                }
                for i in 0..m {
                    for j in i + 1..m {
                        if pairs.contains(&(i, j)) {
                            continue;
                        }
                        let Some((c, rho, w)) = circle(&pts[i], &pts[j], r) else { continue };
                        let z = linalg::add(&c, &linalg::scale(&any_perpendicular(&w), rho));
                        if feasible(&z) {
                            if rho <= tol(r) {
                                linalg_push_unique(&mut vertices, c);
                            } else {
                                pairs.push((i, j));
                            }
                        }
                    }
                }
                for &(i, j) in &pairs {
                    push_single(&mut singles, i);
                    push_single(&mut singles, j);
                }
            }
            _ => return None,
        }
        if m == 1 && d > 1 {
            singles = vec![0];
        }
        let hull = Self {
            radius,
            points: pts,
            vertices,
            singles,
            pairs,
        };
        hull.center_argmax(&linalg::unit(d, 0)).map(|_| hull)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    fn feasible(&self, z: &[f64]) -> bool {
        self.points.iter().all(|a| dist(z, a) <= self.radius + tol(self.radius))
    }

    /// `argmax_{z ∈ X} ⟨z, u⟩` and the maximum, for a unit `u`.
    pub fn center_argmax(&self, u: &[f64]) -> Option<(f64, Vec<f64>)> {
        let r = self.radius;
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut offer = |z: Vec<f64>| {
            let v = dot(&z, u);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, z));
            }
        };
        for v in &self.vertices {
            offer(v.clone());
        }
        for &i in &self.singles {
            let z = linalg::add(&self.points[i], &linalg::scale(u, r));
            if self.feasible(&z) {
                offer(z);
            }
        }
        for &(i, j) in &self.pairs {
            if let Some((c, rho, w)) = circle(&self.points[i], &self.points[j], r) {
                if let Some(z) = circle_argmax(&c, rho, &w, u) {
                    if self.feasible(&z) {
                        offer(z);
                    }
                }
            }
        }
        best
    }

    /// `h(X, u)`.
    pub fn centers_support(&self, u: &[f64]) -> f64 {
        self.center_argmax(u).map_or(f64::NEG_INFINITY, |(v, _)| v)
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        self.membership(y).inside
    }

    pub fn membership(&self, y: &[f64]) -> BallMembership {
        let r = self.radius;
        let mut best = (f64::NEG_INFINITY, Vec::new());
        let mut offer = |v: f64, z: Vec<f64>| {
            if v > best.0 {
                best = (v, z);
            }
        };
        for v in &self.vertices {
            offer(dist(v, y), v.clone());
        }
        for &i in &self.singles {
            let a = &self.points[i];
            let dir = linalg::sub(a, y);
            match linalg::normalized(&dir) {
                // every point of the sphere is at distance r
                None => offer(r, linalg::add(a, &linalg::scale(&linalg::unit(y.len(), 0), r))),
                Some(e) => {
                    let z = linalg::add(a, &linalg::scale(&e, r));
                    if self.feasible(&z) {
                        offer(dist(&z, y), z);
                    }
                }
            }
        }
        for &(i, j) in &self.pairs {
            let Some((c, rho, w)) = circle(&self.points[i], &self.points[j], r) else { continue };
            let mut p = linalg::sub(&c, y);
            let along = dot(&p, &w);
            linalg::axpy(&mut p, -along, &w);
            match linalg::normalized(&p) {
                None => {
                    let z = linalg::add(&c, &linalg::scale(&any_perpendicular(&w), rho));
                    offer(dist(&z, y), z);
                }
                Some(e) => {
                    let z = linalg::add(&c, &linalg::scale(&e, rho));
                    if self.feasible(&z) {
                        offer(dist(&z, y), z);
                    }
                }
            }
        }
        BallMembership {
            inside: best.0 <= r + tol(r),
            max_distance: best.0,
            farthest: best.1,
        }
    }
}

fn linalg_push_unique(set: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    if !set.iter().any(|w| linalg::max_abs_diff(w, &v) <= 1e-10) {
        set.push(v);
    }
}
