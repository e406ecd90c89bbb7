//! Numerical search over a transformation family: looks for `(x, g)` with
//! `A ⊆ g(K + x)` and `z ∉ g(K + x)`. Only verified witnesses are reported.

use nalgebra::{DMatrix, Rotation3, Vector3};
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_points, max_dot, BallHull, HullFamily, LinearPart, Translations};
use crate::error::{Error, Result};
use crate::geometry::{ConvexBody, Facet, Polytope};
use crate::linalg::{self, norm};
use crate::rng::replicate_rng;
use crate::EPS_GEO;

/// A group element acting as `y ↦ g(y + x)` on `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transform {
    pub x: Vec<f64>,
    /// Row-major `d × d`.
    pub g: Vec<f64>,
}

impl Transform {
    pub fn identity(d: usize) -> Self {
        let mut g = vec![0.0; d * d];
        for i in 0..d {
            g[i * d + i] = 1.0;
        }
        Self { x: vec![0.0; d], g }
    }

    fn inverse(&self) -> Option<DMatrix<f64>> {
        let d = self.x.len();
        DMatrix::from_row_slice(d, d, &self.g).try_inverse()
    }

    /// Violation of `g⁻¹y - x` in `K`; `+∞` for a singular `g`.
    pub fn violation(&self, body: &ConvexBody, y: &[f64]) -> f64 {
        match self.inverse() {
            Some(inv) => preimage_violation(body, &inv, &self.x, y),
            None => f64::INFINITY,
        }
    }

    /// `y ∈ g(K + x)`.
    pub fn contains(&self, body: &ConvexBody, y: &[f64]) -> bool {
        self.violation(body, y) <= EPS_GEO
    }
}

fn gauss<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn preimage_violation(body: &ConvexBody, inv: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let q = linalg::sub(&linalg::mat_vec(inv, y), x);
    body.violation(&q)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleAnswer {
    /// No separating transform was found, but some transform contains `A`.
    Inside,
    /// Verified `(x, g)` with `A ⊆ g(K + x)` and `z ∉ g(K + x)`.
    Outside(Transform),
    /// No transform containing `A` was found within the budget.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub starts: usize,
    /// Objective evaluations per start.
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            starts: 64,
            max_evals: 4000,
            seed: 0,
        }
    }
}

/// Parametrisation of `H` by a flat vector.
struct Chart<'a> {
    d: usize,
    family: &'a HullFamily,
    n_trans: usize,
    n_lin: usize,
}

fn rotation_dim(d: usize) -> Result<usize> {
    match d {
        1 => Ok(0),
        2 => Ok(1),
        3 => Ok(3),
        _ => Err(Error::Unsupported("rotations are parametrised for d ≤ 3".into())),
    }
}

fn rotation(d: usize, theta: &[f64]) -> DMatrix<f64> {
    match d {
        1 => DMatrix::identity(1, 1),
        2 => {
            let (s, c) = theta[0].sin_cos();
            DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
        }
        _ => {
            let r = Rotation3::new(Vector3::new(theta[0], theta[1], theta[2]));
            DMatrix::from_iterator(3, 3, r.matrix().iter().copied())
        }
    }
}

impl<'a> Chart<'a> {
    fn new(d: usize, family: &'a HullFamily) -> Result<Self> {
        let n_lin = match family.linear {
            LinearPart::Identity => 0,
            LinearPart::PositiveScalings => 1,
            LinearPart::ScalingsRotations => 1 + rotation_dim(d)?,
            LinearPart::SpecialOrthogonal => rotation_dim(d)?,
            LinearPart::GeneralLinear => d * d,
            LinearPart::DiagonalPositive => d,
        };
        if let Translations::Subspace(b) = &family.translations {
            if b.iter().any(|v| v.len() != d) {
                return Err(Error::param("translations", "basis vectors must have dimension d"));
            }
        }
        Ok(Self {
            d,
            family,
            n_trans: family.translation_dim(d),
            n_lin,
        })
    }

    fn translation(&self, t: &[f64]) -> Vec<f64> {
        match &self.family.translations {
            Translations::Full => t.to_vec(),
            Translations::Zero => vec![0.0; self.d],
            Translations::Subspace(b) => {
                let mut x = vec![0.0; self.d];
                for (c, v) in t.iter().zip(b) {
                    linalg::axpy(&mut x, *c, v);
                }
                x
            }
        }
    }

    fn translation_coords(&self, x: &[f64]) -> Vec<f64> {
        match &self.family.translations {
            Translations::Full => x.to_vec(),
            Translations::Zero => Vec::new(),
            Translations::Subspace(b) => {
                let ortho = linalg::orthonormalize(b, 1e-12);
                let proj: Vec<f64> = {
                    let mut p = vec![0.0; self.d];
                    for e in &ortho {
                        linalg::axpy(&mut p, linalg::dot(e, x), e);
                    }
                    p
                };
                // least-squares coordinates in the given (possibly non-orthonormal) basis
                let m = DMatrix::from_fn(self.d, b.len(), |i, j| b[j][i]);
                let rhs = nalgebra::DVector::from_column_slice(&proj);
                m.svd(true, true)
                    .solve(&rhs, 1e-12)
                    .map(|v| v.iter().copied().collect())
                    .unwrap_or_else(|_| vec![0.0; b.len()])
            }
        }
    }

    fn linear(&self, p: &[f64]) -> DMatrix<f64> {
        let d = self.d;
        match self.family.linear {
            LinearPart::Identity => DMatrix::identity(d, d),
            LinearPart::PositiveScalings => DMatrix::identity(d, d) * p[0].exp(),
            LinearPart::ScalingsRotations => rotation(d, &p[1..]) * p[0].exp(),
            LinearPart::SpecialOrthogonal => rotation(d, p),
            LinearPart::GeneralLinear => DMatrix::identity(d, d) + DMatrix::from_row_slice(d, d, p),
            LinearPart::DiagonalPositive => DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                d,
                p.iter().map(|s| s.exp()),
            )),
        }
    }

    fn transform(&self, params: &[f64]) -> Transform {
        let (t, l) = params.split_at(self.n_trans);
        let g = self.linear(l);
        Transform {
            x: self.translation(t),
            g: (0..self.d * self.d).map(|k| g[(k / self.d, k % self.d)]).collect(),
        }
    }

    /// Random starting point; start 0 is the identity shifted onto `A`.
    fn start(&self, index: u64, x0: &[f64], trans_scale: f64, seed: u64) -> Vec<f64> {
        let mut rng = replicate_rng(seed, index);
        let mut p = self.translation_coords(x0);
        if index > 0 {
            for v in &mut p {
                *v += 0.5 * trans_scale * gauss(&mut rng);
            }
        }
        let mut lin = vec![0.0; self.n_lin];
        if index > 0 {
            match self.family.linear {
                LinearPart::SpecialOrthogonal | LinearPart::ScalingsRotations => {
                    let off = usize::from(self.family.linear == LinearPart::ScalingsRotations);
                    for (k, v) in lin.iter_mut().enumerate() {
                        *v = if k < off {
                            0.5 * gauss(&mut rng)
                        } else {
                            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
                        };
                    }
                }
                LinearPart::GeneralLinear => {
                    for v in &mut lin {
                        *v = 0.3 * gauss(&mut rng);
                    }
                }
                _ => {
                    for v in &mut lin {
                        *v = 0.5 * gauss(&mut rng);
                    }
                }
            }
        }
        p.extend(lin);
        p
    }
}

struct SearchSetup<'a> {
    body: &'a ConvexBody,
    chart: Chart<'a>,
    a: &'a [Vec<f64>],
    scales: Vec<f64>,
    x0: Vec<f64>,
    trans_scale: f64,
}

impl<'a> SearchSetup<'a> {
    fn new(body: &'a ConvexBody, family: &'a HullFamily, a: &'a [Vec<f64>]) -> Result<Self> {
        let d = body.dim();
        check_points(d, a)?;
        let chart = Chart::new(d, family)?;
        let ra = a.iter().map(|p| norm(p)).fold(0.0, f64::max);
        let rk = body.max_boundary_norm();
        let rk = if rk.is_finite() { rk } else { 1.0 };
        let trans_scale = ra + rk + 1.0;
        let mut scales = vec![trans_scale; chart.n_trans];
        scales.extend(vec![1.0; chart.n_lin]);
        let centroid = linalg::scale(
            &a.iter().fold(vec![0.0; d], |acc, p| linalg::add(&acc, p)),
            1.0 / a.len() as f64,
        );
        let kc = match body {
            ConvexBody::Polytope(p) => p.centroid_of_vertices(),
            ConvexBody::Ball { center, .. } => center.clone(),
            ConvexBody::HalfBall { radius, axis } => linalg::scale(axis, radius / 2.0),
            _ => vec![0.0; d],
        };
        Ok(Self {
            body,
            chart,
            a,
            scales,
            x0: linalg::sub(&centroid, &kc),
            trans_scale,
        })
    }

    /// `max_a viol(a)` and `viol(z)` under the transform with parameters `p`.
    fn violations(&self, p: &[f64], z: Option<&[f64]>) -> (f64, f64, Transform) {
        let t = self.chart.transform(p);
        let Some(inv) = t.inverse() else {
            return (f64::INFINITY, f64::NEG_INFINITY, t);
        };
        let va = self
            .a
            .iter()
            .map(|y| preimage_violation(self.body, &inv, &t.x, y))
            .fold(f64::NEG_INFINITY, f64::max);
        let vz = z.map_or(f64::NEG_INFINITY, |z| preimage_violation(self.body, &inv, &t.x, z));
        (va, vz, t)
    }

    /// Compass search minimising `objective(viol_A, viol_z)`, stopping at the
    /// first point accepted by `done`. Also reports whether any evaluated
    /// transform contained `A`.
    fn compass<F, D>(
        &self,
        start: Vec<f64>,
        z: Option<&[f64]>,
        max_evals: usize,
        objective: F,
        done: D,
    ) -> (Option<Transform>, bool)
    where
        F: Fn(f64, f64) -> f64,
        D: Fn(f64, f64) -> bool,
    {
        let mut contained = false;
        let mut cur = start;
        let (va, vz, t) = self.violations(&cur, z);
        let mut evals = 1;
        contained |= va <= EPS_GEO;
        if done(va, vz) {
            return (Some(t), contained);
        }
        let mut f_cur = objective(va, vz);
        let mut step = 0.25;
        while step > 1e-9 && evals < max_evals {
            let mut improved = false;
            'coords: for i in 0..cur.len() {
                for s in [1.0, -1.0] {
                    let mut trial = cur.clone();
                    trial[i] += s * step * self.scales[i];
                    let (va, vz, t) = self.violations(&trial, z);
                    evals += 1;
                    contained |= va <= EPS_GEO;
                    if done(va, vz) {
                        return (Some(t), contained);
                    }
                    let f = objective(va, vz);
                    if f < f_cur {
                        f_cur = f;
                        cur = trial;
                        improved = true;
                        break 'coords;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        (None, contained)
    }

    fn start(&self, index: usize, seed: u64) -> Vec<f64> {
        self.chart.start(index as u64, &self.x0, self.trans_scale, seed)
    }
}

/// Searches `H` for a transform separating `z` from `A`. Starts run in
/// parallel; the witness of the lowest-indexed successful start is returned.
pub fn generic_hull_membership(
    body: &ConvexBody,
    family: &HullFamily,
    a: &[Vec<f64>],
    z: &[f64],
    budget: &OracleBudget,
) -> Result<OracleAnswer> {
    let setup = SearchSetup::new(body, family, a)?;
    if z.len() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: z.len(),
        });
    }
    if budget.starts == 0 {
        return Err(Error::param("starts", "must be positive"));
    }
    if a.iter().any(|p| linalg::dist(p, z) <= EPS_GEO) {
        return Ok(OracleAnswer::Inside);
    }
    let results: Vec<(Option<Transform>, bool)> = (0..budget.starts)
        .into_par_iter()
        .map(|s| {
            setup.compass(
                setup.start(s, budget.seed),
                Some(z),
                budget.max_evals,
                |va, vz| va.max(-vz),
                |va, vz| va <= EPS_GEO && vz > EPS_GEO,
            )
        })
        .collect();
    for (w, _) in &results {
        if let Some(t) = w {
            // re-verify with the stored transform
            if a.iter().all(|p| t.contains(body, p)) && !t.contains(body, z) {
                return Ok(OracleAnswer::Outside(t.clone()));
            }
        }
    }
    Ok(if results.iter().any(|(_, c)| *c) {
        OracleAnswer::Inside
    } else {
        OracleAnswer::Unknown
    })
}

/// `K ⊖_{K,H} A = {(x, g) ∈ H : A ⊆ g(K + x)}`.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Empty,
    /// Translations `x` with `A ⊆ K + x`, for a polytope `K`.
    Polytope(Polytope),
    /// Translations `x` with `A ⊆ K + x` for `K = B(c, r)`:
    /// `∩ B(a - c, r)`.
    BallIntersection { centers: Vec<Vec<f64>>, radius: f64 },
    /// Verified members found by search.
    Samples(Vec<Transform>),
}

impl FeasibleSet {
    /// Membership of a pure translation.
    pub fn contains_translation(&self, x: &[f64]) -> Option<bool> {
        match self {
            FeasibleSet::Empty => Some(false),
            FeasibleSet::Polytope(p) => Some(p.contains(x)),
            FeasibleSet::BallIntersection { centers, radius } => {
                Some(centers.iter().all(|c| linalg::dist(c, x) <= radius + EPS_GEO))
            }
            FeasibleSet::Samples(_) => None,
        }
    }
}

pub fn feasible_set(
    body: &ConvexBody,
    family: &HullFamily,
    a: &[Vec<f64>],
    budget: &OracleBudget,
) -> Result<FeasibleSet> {
    let d = body.dim();
    check_points(d, a)?;
    if family.translations == Translations::Full && family.linear == LinearPart::Identity {
        match body {
            ConvexBody::Polytope(p) => {
                // ⟨u_i, x⟩ ≥ max_a ⟨u_i, a⟩ - h_i
                let facets: Vec<Facet> = p
                    .facets()
                    .iter()
                    .map(|f| Facet::new(linalg::scale(&f.normal, -1.0), f.offset - max_dot(a, &f.normal)))
                    .collect::<Result<_>>()?;
                let x = Polytope::from_halfspaces(d, &facets)?;
                return Ok(if x.is_empty() { FeasibleSet::Empty } else { FeasibleSet::Polytope(x) });
            }
            ConvexBody::Ball { radius, center } if d <= 3 => {
                return Ok(match BallHull::new(*radius, a) {
                    None => FeasibleSet::Empty,
                    Some(_) => FeasibleSet::BallIntersection {
                        centers: a.iter().map(|p| linalg::sub(p, center)).collect(),
                        radius: *radius,
                    },
                });
            }
            _ => {}
        }
    }
    let setup = SearchSetup::new(body, family, a)?;
    let found: Vec<Option<Transform>> = (0..budget.starts)
        .into_par_iter()
        .map(|s| {
            setup
                .compass(setup.start(s, budget.seed), None, budget.max_evals, |va, _| va, |va, _| va <= EPS_GEO)
                .0
        })
        .collect();
    let samples: Vec<Transform> = found
        .into_iter()
        .flatten()
        .filter(|t| a.iter().all(|p| t.contains(body, p)))
        .collect();
    Ok(if samples.is_empty() { FeasibleSet::Empty } else { FeasibleSet::Samples(samples) })
}
