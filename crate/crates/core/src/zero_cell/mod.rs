//! The limit cell `ℨ_K = ∩ {(x, C) : ⟨Cη + x, u⟩ ≤ t}` over the marks of
//! `P_K`, as a half-space system in `R^d × M_d ≅ R^{d + d²}`.
//!
//! A tangent point `(x, C)` is flattened as `x` followed by the rows of `C`
//! (entry `(i, j)` sits at index `d + i·d + j`). With this layout the inner
//! product `⟨x, y⟩ + Tr(C Dᵀ)` is the plain dot product, and the constraint
//! from a mark `(t, η, u)` has normal `(u, N)` with `N_ij = u_i η_j`.

mod cone_spec;
mod polar;
mod recession;

pub use cone_spec::{ConeSpec, ConeSystem, PRESETS};
pub use polar::ZeroCellPolar;
pub use recession::{
    is_bounded, min_quadratic_on_sphere, recession_cone_tk, recession_in_cone, BoundednessCertificate,
    RecessionCone, RestrictedRecession,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg::{dot, norm};
use crate::lp::{LinearProgram, LpOutcome, Vars};
use crate::poisson::{sample_pk_with, BoundarySampler, NormalBundleMark};
use crate::rng::replicate_rng;
use crate::EPS_GEO;

pub fn tangent_dim(d: usize) -> usize {
    d + d * d
}

pub fn flat_index(d: usize, i: usize, j: usize) -> usize {
    d + i * d + j
}

/// Recovers `d` from `d + d²`.
pub fn base_dim(n: usize) -> Option<usize> {
    (1..=n).find(|&d| d + d * d == n)
}

/// `(x, C) ∈ R^d × M_d`, with `C` stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPoint {
    pub x: Vec<f64>,
    pub c: Vec<f64>,
}

impl TangentPoint {
    pub fn new(x: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if c.len() != x.len() * x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len() * x.len(),
                got: c.len(),
            });
        }
        Ok(Self { x, c })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            x: vec![0.0; d],
            c: vec![0.0; d * d],
        }
    }

    /// `(0, μI)`.
    pub fn scalar(d: usize, mu: f64) -> Self {
        let mut p = Self::zero(d);
        for i in 0..d {
            p.c[i * d + i] = mu;
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn c_at(&self, i: usize, j: usize) -> f64 {
        self.c[i * self.dim() + j]
    }

    pub fn flatten(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.c);
        v
    }

    pub fn from_flat(d: usize, v: &[f64]) -> Result<Self> {
        if v.len() != tangent_dim(d) {
            return Err(Error::DimensionMismatch {
                expected: tangent_dim(d),
                got: v.len(),
            });
        }
        Ok(Self {
            x: v[..d].to_vec(),
            c: v[d..].to_vec(),
        })
    }

    /// `Cη + x`.
    pub fn apply(&self, eta: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| self.x[i] + (0..d).map(|j| self.c[i * d + j] * eta[j]).sum::<f64>())
            .collect()
    }
}

/// `⟨x, y⟩ + Tr(C Dᵀ)`.
pub fn inner1(a: &TangentPoint, b: &TangentPoint) -> f64 {
    dot(&a.x, &b.x) + dot(&a.c, &b.c)
}

/// `{p : ⟨normal, p⟩ ≤ offset}` in the flattened tangent space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Constraint `⟨Cη + x, u⟩ ≤ t` generated by one mark.
pub fn halfspace_from_mark(m: &NormalBundleMark) -> Constraint {
    let d = m.u.len();
    let mut normal = m.u.clone();
    normal.reserve(d * d);
    for i in 0..d {
        for j in 0..d {
            normal.push(m.u[i] * m.eta[j]);
        }
    }
    Constraint { normal, offset: m.t }
}

/// Finite intersection of half-spaces with positive offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceSystem {
    pub d: usize,
    pub constraints: Vec<Constraint>,
    /// Marks the constraints came from (empty for derived systems).
    pub marks: Vec<NormalBundleMark>,
    /// Radius of the observation window in the tangent norm, if any.
    pub window: Option<f64>,
    pub t_max: Option<f64>,
}

/// Horizon beyond which no mark can cut the window of radius `window`.
pub fn window_horizon(body: &ConvexBody, window: f64) -> f64 {
    window * (1.0 + body.max_boundary_norm())
}

/// Simulates `ℨ_K` restricted to the ball of radius `window`; exact inside
/// that window.
pub fn build_zero_cell(body: &ConvexBody, window: f64, seed: u64) -> Result<HalfSpaceSystem> {
    let sampler = BoundarySampler::new(body)?;
    let mut rng = replicate_rng(seed, 0);
    build_zero_cell_with(body, &sampler, window, &mut rng)
}

pub fn build_zero_cell_with<R: Rng + ?Sized>(
    body: &ConvexBody,
    sampler: &BoundarySampler,
    window: f64,
    rng: &mut R,
) -> Result<HalfSpaceSystem> {
    if !(window.is_finite() && window >= 0.0) {
        return Err(Error::param("window", "must be finite and nonnegative"));
    }
    let t_max = window_horizon(body, window);
    let marks = if t_max > 0.0 {
        sample_pk_with(sampler, t_max, rng)
    } else {
        Vec::new()
    };
    Ok(HalfSpaceSystem::from_marks(body.dim(), marks, Some(window), Some(t_max)))
}

impl HalfSpaceSystem {
    pub fn from_marks(d: usize, marks: Vec<NormalBundleMark>, window: Option<f64>, t_max: Option<f64>) -> Self {
        Self {
            d,
            constraints: marks.iter().map(halfspace_from_mark).collect(),
            marks,
            window,
            t_max,
        }
    }

    pub fn from_constraints(d: usize, constraints: Vec<Constraint>) -> Self {
        Self {
            d,
            constraints,
            marks: Vec::new(),
            window: None,
            t_max: None,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        tangent_dim(self.d)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn membership(&self, p: &[f64]) -> bool {
        self.constraints
            .iter()
            .all(|c| dot(&c.normal, p) <= c.offset + EPS_GEO)
    }

    pub fn contains(&self, p: &TangentPoint) -> bool {
        self.membership(&p.flatten())
    }

    /// `sup {s : s·direction ∈ S ∩ cone}`; `+∞` when no constraint has a
    /// positive inner product with the direction.
    pub fn support_extent(&self, direction: &[f64], cone: &ConeSpec) -> Result<f64> {
        if direction.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: direction.len(),
            });
        }
        if !cone.in_subspace(direction) {
            return Err(Error::param("direction", "must lie in the cone's subspace"));
        }
        if cone.sign_functionals().iter().any(|f| dot(f, direction) > EPS_GEO) {
            return Ok(0.0);
        }
        Ok(self.ray_extent(direction))
    }

    /// `min t/⟨n, v⟩` over constraints with `⟨n, v⟩ > 0`.
    pub fn ray_extent(&self, v: &[f64]) -> f64 {
        self.constraints
            .iter()
            .filter_map(|c| {
                let a = dot(&c.normal, v);
                (a > 0.0).then(|| c.offset / a)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `sup ⟨y, p⟩` over the system (LP); `+∞` if unbounded.
    pub fn support(&self, y: &[f64]) -> f64 {
        let mut lp = LinearProgram::new(self.ambient_dim(), Vars::Free).maximize(y);
        for c in &self.constraints {
            lp.push_le(&c.normal, c.offset);
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded { .. } => f64::INFINITY,
            LpOutcome::Infeasible => unreachable!("the origin is feasible"),
        }
    }

    pub fn restrict_to_cone(&self, cone: &ConeSpec) -> Result<ConeSystem> {
        ConeSystem::restrict(self, cone)
    }

    /// Membership in the result at `p` equals membership here at `-p`.
    pub fn reflect(&self) -> Self {
        let mut out = self.clone();
        for c in &mut out.constraints {
            for v in &mut c.normal {
                *v = -*v;
            }
        }
        out.marks.clear();
        out
    }

    /// System for `K + v` from the same marks: `(t, η + v, u)`.
    pub fn transform_translation_of_k(&self, v: &[f64]) -> Result<Self> {
        let d = self.d;
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.len() });
        }
        let mut out = self.clone();
        for c in &mut out.constraints {
            let u = c.normal[..d].to_vec();
            for i in 0..d {
                for j in 0..d {
                    c.normal[flat_index(d, i, j)] += u[i] * v[j];
                }
            }
        }
        for m in &mut out.marks {
            for (e, s) in m.eta.iter_mut().zip(v) {
                *e += s;
            }
        }
        Ok(out)
    }

    /// System for `AK` (with `A` orthogonal, row-major) from the marks
    /// `(t, Aη, Au)`: normals are mapped by `(x, C) ↦ (Ax, ACAᵀ)`.
    pub fn transform_rotation_of_k(&self, a: &[f64]) -> Result<Self> {
        let d = self.d;
        check_orthogonal(d, a)?;
        let mut out = self.clone();
        for c in &mut out.constraints {
            c.normal = rotate_tangent(d, a, &c.normal);
        }
        for m in &mut out.marks {
            m.eta = mat_vec_rm(d, a, &m.eta);
            m.u = mat_vec_rm(d, a, &m.u);
        }
        Ok(out)
    }

    pub fn polar(&self) -> ZeroCellPolar {
        ZeroCellPolar::from_system(self)
    }
}

fn mat_vec_rm(d: usize, a: &[f64], v: &[f64]) -> Vec<f64> {
    (0..d)
        .map(|i| (0..d).map(|j| a[i * d + j] * v[j]).sum())
        .collect()
}

fn check_orthogonal(d: usize, a: &[f64]) -> Result<()> {
    if a.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: a.len(),
        });
    }
    for i in 0..d {
        for j in 0..d {
            let g: f64 = (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum();
            let e = if i == j { 1.0 } else { 0.0 };
            if (g - e).abs() > 1e-10 {
                return Err(Error::param("rotation", "matrix is not orthogonal"));
            }
        }
    }
    Ok(())
}

/// `𝒪_A : (x, C) ↦ (Ax, ACAᵀ)` on a flattened tangent vector.
pub fn rotate_tangent(d: usize, a: &[f64], p: &[f64]) -> Vec<f64> {
    let mut out = mat_vec_rm(d, a, &p[..d]);
    let c = &p[d..];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                for l in 0..d {
                    s += a[i * d + k] * c[k * d + l] * a[j * d + l];
                }
            }
            out.push(s);
        }
    }
    out
}

/// Euclidean norm in the tangent space.
pub fn tangent_norm(p: &[f64]) -> f64 {
    norm(p)
}
