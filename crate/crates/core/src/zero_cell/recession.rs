//! The cone `T_K = ∩_{(y,u) ∈ Nor(K)} {(x, C) : ⟨Cy + x, u⟩ ≥ 0}`, its
//! reflection `Ť_K = -T_K`, and the boundedness test
//! `Ť_K ∩ cone = {0}`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{flat_index, tangent_dim, ConeSpec, ConeSystem, TangentPoint};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, PolyhedralCone};
use crate::linalg::{self, dot, norm};
use crate::lp::{LinearProgram, LpOutcome, Vars};

const MEMBER_TOL: f64 = 1e-10;
const LP_ZERO: f64 = 1e-9;
const MAX_CUTS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub enum RecessionCone {
    /// Finitely many normal-bundle pairs `(y, u)` suffice (polytopes: every
    /// vertex of every facet, paired with the facet normal).
    Finite { d: usize, pairs: Vec<(Vec<f64>, Vec<f64>)> },
    /// Ball: all pairs `(c + r u, u)`, handled through a quadratic form.
    Ball { radius: f64, center: Vec<f64> },
}

pub fn recession_cone_tk(body: &ConvexBody) -> Result<RecessionCone> {
    match body {
        ConvexBody::Polytope(p) => {
            let mut pairs = Vec::new();
            for (i, f) in p.facets().iter().enumerate() {
                for k in p.facet_vertices(i) {
                    pairs.push((p.vertices()[k].clone(), f.normal.clone()));
                }
            }
            Ok(RecessionCone::Finite { d: p.dim(), pairs })
        }
        ConvexBody::Ball { radius, center } => Ok(RecessionCone::Ball {
            radius: *radius,
            center: center.clone(),
        }),
        other => Err(Error::Unsupported(format!("recession cone of a {}", other.kind_name()))),
    }
}

/// Flattened `(u, u yᵀ)`, so that `⟨(x, C), n⟩ = ⟨Cy + x, u⟩`.
pub(crate) fn pair_normal(y: &[f64], u: &[f64]) -> Vec<f64> {
    let d = u.len();
    let mut n = u.to_vec();
    n.resize(tangent_dim(d), 0.0);
    for i in 0..d {
        for j in 0..d {
            n[flat_index(d, i, j)] = u[i] * y[j];
        }
    }
    n
}

/// Global minimum of `uᵀSu + bᵀu` over the unit sphere (`S` symmetric),
/// with a minimiser. Solves the secular equation of the trust-region
/// problem, including the hard case, and cross-checks on a direction grid.
pub fn min_quadratic_on_sphere(s: &DMatrix<f64>, b: &[f64]) -> (f64, Vec<f64>) {
    let d = b.len();
    let eval = |u: &[f64]| -> f64 {
        let su = linalg::mat_vec(s, u);
        dot(u, &su) + dot(b, u)
    };
    let eig = SymmetricEigen::new(s.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let lam: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let q: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    let bt: Vec<f64> = q.iter().map(|v| dot(v, b)).collect();
    let scale = 1.0 + lam.iter().fold(0.0f64, |m, l| m.max(l.abs())) + norm(b);
    let lead = lam[0];
    let degenerate = |i: usize| lam[i] - lead <= 1e-12 * scale;
    let g = |l: f64| -> f64 { bt.iter().zip(&lam).map(|(bi, li)| bi * bi / (4.0 * (l - li).powi(2))).sum() };

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let lead_weight: f64 = (0..d).filter(|&i| degenerate(i)).map(|i| bt[i] * bt[i]).sum();
    let to_ambient = |coef: &[f64]| -> Vec<f64> {
        let mut u = vec![0.0; d];
        for (c, v) in coef.iter().zip(&q) {
            linalg::axpy(&mut u, *c, v);
        }
        u
    };
    if lead_weight.sqrt() > 1e-12 * scale || g(lead - 1e-14 * scale) >= 1.0 {
        // Easy case: the root λ < λ_min of g(λ) = 1.
        let mut lo = lead - norm(b) / 2.0 - 1.0;
        let mut hi = lead;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid >= hi || mid <= lo {
                break;
            }
            if g(mid) < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let l = 0.5 * (lo + hi);
        let coef: Vec<f64> = bt
            .iter()
            .zip(&lam)
            .map(|(bi, li)| if (l - li).abs() > 0.0 { bi / (2.0 * (l - li)) } else { 0.0 })
            .collect();
        candidates.push(to_ambient(&coef));
    } else {
        // Hard case: λ = λ_min, fill up with the leading eigenvector.
        let mut coef: Vec<f64> = (0..d)
            .map(|i| if degenerate(i) { 0.0 } else { bt[i] / (2.0 * (lead - lam[i])) })
            .collect();
        let rest: f64 = coef.iter().map(|c| c * c).sum();
        let tau = (1.0 - rest).max(0.0).sqrt();
        for sgn in [1.0, -1.0] {
            coef[0] = sgn * tau;
            candidates.push(to_ambient(&coef));
        }
    }
    for v in &q {
        candidates.push(v.clone());
        candidates.push(linalg::scale(v, -1.0));
    }
    candidates.extend(sphere_grid(d, 2000));

    let mut best = (f64::INFINITY, vec![0.0; d]);
    for c in candidates {
        if let Some(u) = linalg::normalized(&c) {
            let v = eval(&u);
            if v < best.0 {
                best = (v, u);
            }
        }
    }
    best
}

/// Deterministic, roughly uniform directions on `S^{d-1}`, always including
/// `±e_i` and `(±e_i ± e_j)/√2`.
pub(crate) fn sphere_grid(d: usize, n: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..d {
        out.push(linalg::unit(d, i));
        out.push(linalg::scale(&linalg::unit(d, i), -1.0));
        for j in i + 1..d {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut v = vec![0.0; d];
                v[i] = si * std::f64::consts::FRAC_1_SQRT_2;
                v[j] = sj * std::f64::consts::FRAC_1_SQRT_2;
                out.push(v);
            }
        }
    }
    match d {
        2 => {
            for k in 0..n {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                out.push(vec![a.cos(), a.sin()]);
            }
        }
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
            for k in 0..n {
                let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * k as f64;
                out.push(vec![r * phi.cos(), r * phi.sin(), z]);
            }
        }
        _ => {}
    }
    out
}

impl RecessionCone {
    pub fn d(&self) -> usize {
        match self {
            Self::Finite { d, .. } => *d,
            Self::Ball { center, .. } => center.len(),
        }
    }

    /// `min ⟨Cy + x, u⟩` over the normal bundle, with a minimising pair.
    pub fn min_form(&self, p: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
        let d = self.d();
        match self {
            Self::Finite { pairs, .. } => {
                let mut best = (f64::INFINITY, vec![0.0; d], vec![0.0; d]);
                for (y, u) in pairs {
                    let v = dot(&pair_normal(y, u), p);
                    if v < best.0 {
                        best = (v, y.clone(), u.clone());
                    }
                }
                best
            }
            Self::Ball { radius, center } => {
                let tp = TangentPoint::from_flat(d, p).expect("flattened tangent point");
                let c = DMatrix::from_row_slice(d, d, &tp.c);
                let s = (&c + c.transpose()) * (0.5 * radius);
                let b = tp.apply(center);
                let (v, u) = min_quadratic_on_sphere(&s, &b);
                let y = linalg::add(center, &linalg::scale(&u, *radius));
                (v, y, u)
            }
        }
    }

    /// `p ∈ T_K`.
    pub fn contains(&self, p: &[f64]) -> bool {
        self.min_form(p).0 >= -MEMBER_TOL * (1.0 + norm(p))
    }

    /// `p ∈ Ť_K`.
    pub fn contains_reflected(&self, p: &[f64]) -> bool {
        self.contains(&linalg::scale(p, -1.0))
    }

    /// Pairs defining the initial polyhedral outer approximation.
    fn seed_pairs(&self) -> Vec<(Vec<f64>, Vec<f64>)> {
        match self {
            Self::Finite { pairs, .. } => pairs.clone(),
            Self::Ball { radius, center } => sphere_grid(center.len(), 64)
                .into_iter()
                .map(|u| (linalg::add(center, &linalg::scale(&u, *radius)), u))
                .collect(),
        }
    }

    fn is_exact(&self) -> bool {
        matches!(self, Self::Finite { .. })
    }
}

/// Outcome of a boundedness test. `ray` is a verified nonzero point of the
/// recession cone when the set is unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessCertificate {
    pub bounded: bool,
    pub ray: Option<Vec<f64>>,
    /// `true` when the verdict is certified rather than heuristic.
    pub exact: bool,
    /// Largest coordinate reached over the outer approximation intersected
    /// with the unit `ℓ¹` ball.
    pub lp_max: f64,
    pub cuts: usize,
}

/// Maximises `±w_j` over `{G w ≤ 0, ‖w‖₁ ≤ 1}`; returns the best value and
/// its maximiser.
fn lp_coordinate_max(normals: &[Vec<f64>], k: usize) -> (f64, Vec<f64>) {
    let mut best = (0.0, vec![0.0; k]);
    for j in 0..k {
        for s in [1.0, -1.0] {
            let mut obj = vec![0.0; 2 * k];
            obj[j] = s;
            obj[k + j] = -s;
            let mut lp = LinearProgram::new(2 * k, Vars::NonNegative).maximize(&obj);
            for g in normals {
                let mut row = g.clone();
                row.extend(g.iter().map(|v| -v));
                lp.push_le(&row, 0.0);
            }
            lp.push_le(&vec![1.0; 2 * k], 1.0);
            if let LpOutcome::Optimal { x, value } = lp.solve() {
                if value > best.0 {
                    best = (value, (0..k).map(|i| x[i] - x[k + i]).collect());
                }
            }
        }
    }
    best
}

impl ConeSystem {
    /// Boundedness of the finite restricted system: its recession cone is
    /// `{w : ⟨n, w⟩ ≤ 0}` over all constraint and sign normals.
    pub fn is_bounded(&self) -> BoundednessCertificate {
        let (val, w) = lp_coordinate_max(&self.recession_normals(), self.coord_dim());
        let bounded = val <= LP_ZERO;
        BoundednessCertificate {
            bounded,
            ray: (!bounded).then(|| self.cone.embed(&w)),
            exact: true,
            lp_max: val,
            cuts: 0,
        }
    }
}

/// Decides `Ť_K ∩ cone = {0}` by LP over polyhedral outer approximations
/// refined with cutting planes; unboundedness is reported only with a ray
/// verified by the exact membership test.
pub fn is_bounded(body: &ConvexBody, cone: &ConeSpec) -> Result<BoundednessCertificate> {
    let rc = recession_cone_tk(body)?;
    if cone.d != rc.d() {
        return Err(Error::DimensionMismatch {
            expected: rc.d(),
            got: cone.d,
        });
    }
    let k = cone.coord_dim();
    let verified = |p: &[f64]| match linalg::normalized(p) {
        Some(q) if norm(p) > 1e-9 => cone.contains(&q) && rc.contains_reflected(&q),
        _ => false,
    };

    // Cheap candidates first: basis directions and the scalar ray (0, -I).
    let mut seeds: Vec<Vec<f64>> = Vec::new();
    for b in cone.basis() {
        seeds.push(b.clone());
        seeds.push(linalg::scale(b, -1.0));
    }
    let minus_id = TangentPoint::scalar(rc.d(), -1.0).flatten();
    seeds.push(cone.embed(&cone.project(&minus_id)));
    for p in seeds {
        if verified(&p) {
            return Ok(BoundednessCertificate {
                bounded: false,
                ray: linalg::normalized(&p),
                exact: true,
                lp_max: f64::NAN,
                cuts: 0,
            });
        }
    }

    let mut normals: Vec<Vec<f64>> = rc
        .seed_pairs()
        .iter()
        .map(|(y, u)| cone.project(&pair_normal(y, u)))
        .collect();
    normals.extend(cone.signs_in_coords());
    let mut last = (0.0, vec![0.0; k]);
    for cut in 0..=MAX_CUTS {
        let (val, w) = lp_coordinate_max(&normals, k);
        if val <= LP_ZERO {
            return Ok(BoundednessCertificate {
                bounded: true,
                ray: None,
                exact: true,
                lp_max: val,
                cuts: cut,
            });
        }
        let p = cone.embed(&w);
        if rc.is_exact() || verified(&p) {
            return Ok(BoundednessCertificate {
                bounded: false,
                ray: linalg::normalized(&p),
                exact: true,
                lp_max: val,
                cuts: cut,
            });
        }
        let (_, y, u) = rc.min_form(&linalg::scale(&p, -1.0));
        normals.push(cone.project(&pair_normal(&y, &u)));
        last = (val, w);
    }
    Ok(BoundednessCertificate {
        bounded: false,
        ray: linalg::normalized(&cone.embed(&last.1)),
        exact: false,
        lp_max: last.0,
        cuts: MAX_CUTS,
    })
}

/// `Ť_K ∩ cone` as a polyhedral cone in the cone's coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedRecession {
    pub cone: PolyhedralCone,
    pub spec: ConeSpec,
    /// Every generator passed the exact membership test.
    pub exact: bool,
}

/// Drops zero, duplicate and conically redundant normals.
fn prune_cone_normals(normals: &[Vec<f64>], k: usize) -> Vec<Vec<f64>> {
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for n in normals {
        if let Some(u) = linalg::normalized(n) {
            if !uniq.iter().any(|v| linalg::max_abs_diff(v, &u) <= 1e-9) {
                uniq.push(u);
            }
        }
    }
    let mut i = 0;
    while i < uniq.len() {
        let others: Vec<&Vec<f64>> = uniq.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).collect();
        let mut lp = LinearProgram::new(others.len(), Vars::NonNegative);
        for r in 0..k {
            let row: Vec<f64> = others.iter().map(|v| v[r]).collect();
            lp.push_eq(&row, uniq[i][r]);
        }
        if !others.is_empty() && lp.solve().is_feasible() {
            uniq.remove(i);
        } else {
            i += 1;
        }
    }
    uniq
}

pub fn recession_in_cone(body: &ConvexBody, cone: &ConeSpec) -> Result<RestrictedRecession> {
    let rc = recession_cone_tk(body)?;
    if cone.d != rc.d() {
        return Err(Error::DimensionMismatch {
            expected: rc.d(),
            got: cone.d,
        });
    }
    let k = cone.coord_dim();
    let mut normals: Vec<Vec<f64>> = rc
        .seed_pairs()
        .iter()
        .map(|(y, u)| cone.project(&pair_normal(y, u)))
        .collect();
    normals.extend(cone.signs_in_coords());
    for _ in 0..=MAX_CUTS {
        normals = prune_cone_normals(&normals, k);
        let pc = PolyhedralCone::from_normals(k, &normals)?;
        let mut failing = Vec::new();
        for r in pc.rays() {
            let p = cone.embed(r);
            if !rc.contains_reflected(&p) {
                failing.push(p);
            }
        }
        if failing.is_empty() {
            return Ok(RestrictedRecession {
                cone: pc,
                spec: cone.clone(),
                exact: true,
            });
        }
        for p in failing {
            let (_, y, u) = rc.min_form(&linalg::scale(&p, -1.0));
            normals.push(cone.project(&pair_normal(&y, &u)));
        }
    }
    let pc = PolyhedralCone::from_normals(k, &prune_cone_normals(&normals, k))?;
    Ok(RestrictedRecession {
        cone: pc,
        spec: cone.clone(),
        exact: false,
    })
}
