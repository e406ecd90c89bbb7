use serde::{Deserialize, Serialize};

use super::{flat_index, tangent_dim, HalfSpaceSystem};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, norm};
use crate::lp::{LinearProgram, LpOutcome, Vars};
use crate::EPS_GEO;

/// Names accepted by [`ConeSpec::preset`].
pub const PRESETS: &[&str] = &[
    "translations",
    "skew",
    "translations-skew",
    "traceless",
    "sym-traceless",
    "diagonal",
    "nonpositive-diagonal",
    "scalar",
    "scalings",
    "matrices",
    "full",
];

/// A cone in the tangent space: a linear subspace with an orthonormal basis,
/// optionally cut by homogeneous sign constraints `⟨f, p⟩ ≤ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub name: String,
    pub d: usize,
    basis: Vec<Vec<f64>>,
    signs: Vec<Vec<f64>>,
}

fn e(d: usize, k: usize) -> Vec<f64> {
    linalg::unit(tangent_dim(d), k)
}

fn mat_unit(d: usize, i: usize, j: usize) -> Vec<f64> {
    e(d, flat_index(d, i, j))
}

fn combo(terms: &[(f64, Vec<f64>)]) -> Vec<f64> {
    let mut v = vec![0.0; terms[0].1.len()];
    for (c, t) in terms {
        linalg::axpy(&mut v, *c, t);
    }
    v
}

impl ConeSpec {
    pub fn new(name: &str, d: usize, spanning: &[Vec<f64>], signs: Vec<Vec<f64>>) -> Result<Self> {
        let n = tangent_dim(d);
        for v in spanning.iter().chain(&signs) {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        Ok(Self {
            name: name.to_string(),
            d,
            basis: linalg::orthonormalize(spanning, 1e-12),
            signs,
        })
    }

    pub fn preset(name: &str, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("d", "must be positive"));
        }
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let translations: Vec<Vec<f64>> = (0..d).map(|i| e(d, i)).collect();
        let skew: Vec<Vec<f64>> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| combo(&[(s2, mat_unit(d, i, j)), (-s2, mat_unit(d, j, i))]))
            .collect();
        let sym_off: Vec<Vec<f64>> = (0..d)
            .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
            .map(|(i, j)| combo(&[(s2, mat_unit(d, i, j)), (s2, mat_unit(d, j, i))]))
            .collect();
        let offdiag: Vec<Vec<f64>> = (0..d)
            .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| mat_unit(d, i, j))
            .collect();
        let diag: Vec<Vec<f64>> = (0..d).map(|i| mat_unit(d, i, i)).collect();
        let diag_traceless: Vec<Vec<f64>> = (0..d.saturating_sub(1))
            .map(|i| combo(&[(1.0, mat_unit(d, i, i)), (-1.0, mat_unit(d, i + 1, i + 1))]))
            .collect();
        let identity = combo(&diag.iter().map(|v| (1.0, v.clone())).collect::<Vec<_>>());
        let matrices: Vec<Vec<f64>> = (0..d * d).map(|k| e(d, d + k)).collect();

        let cat = |parts: &[&[Vec<f64>]]| parts.iter().flat_map(|p| p.iter().cloned()).collect::<Vec<_>>();
        let (span, signs) = match name {
            "translations" => (translations, vec![]),
            "skew" => (skew, vec![]),
            "translations-skew" => (cat(&[&translations, &skew]), vec![]),
            "traceless" => (cat(&[&offdiag, &diag_traceless]), vec![]),
            "sym-traceless" => (cat(&[&sym_off, &diag_traceless]), vec![]),
            "diagonal" => (diag.clone(), vec![]),
            "nonpositive-diagonal" => (diag.clone(), diag.clone()),
            "scalar" => (vec![identity], vec![]),
            "scalings" => (cat(&[&translations, &[identity]]), vec![]),
            "matrices" => (matrices, vec![]),
            "full" => ((0..tangent_dim(d)).map(|k| e(d, k)).collect(), vec![]),
            other => {
                return Err(Error::param(
                    "cone",
                    format!("unknown preset `{other}` (expected one of {})", PRESETS.join(", ")),
                ))
            }
        };
        Self::new(name, d, &span, signs)
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Functionals `f` of the sign constraints `⟨f, p⟩ ≤ 0`.
    pub fn sign_functionals(&self) -> &[Vec<f64>] {
        &self.signs
    }

    pub fn coord_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        tangent_dim(self.d)
    }

    pub fn embed(&self, w: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.ambient_dim()];
        for (c, b) in w.iter().zip(&self.basis) {
            linalg::axpy(&mut p, *c, b);
        }
        p
    }

    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| dot(b, p)).collect()
    }

    pub fn in_subspace(&self, p: &[f64]) -> bool {
        let back = self.embed(&self.project(p));
        linalg::dist(&back, p) <= EPS_GEO * (1.0 + norm(p))
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.in_subspace(p) && self.signs.iter().all(|f| dot(f, p) <= EPS_GEO * (1.0 + norm(p)))
    }

    /// Sign constraints in subspace coordinates.
    pub fn signs_in_coords(&self) -> Vec<Vec<f64>> {
        self.signs.iter().map(|f| self.project(f)).collect()
    }
}

/// A zero-cell system restricted to a cone, in the cone's coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSystem {
    pub cone: ConeSpec,
    /// Projected constraint normals; constraints that vanish on the subspace
    /// are dropped.
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
    /// Homogeneous constraints `⟨g, w⟩ ≤ 0`.
    pub signs: Vec<Vec<f64>>,
}

impl ConeSystem {
    pub(super) fn restrict(sys: &HalfSpaceSystem, cone: &ConeSpec) -> Result<Self> {
        if cone.d != sys.d {
            return Err(Error::DimensionMismatch {
                expected: sys.d,
                got: cone.d,
            });
        }
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for c in &sys.constraints {
            let n = cone.project(&c.normal);
            if norm(&n) > 1e-14 * (1.0 + norm(&c.normal)) {
                normals.push(n);
                offsets.push(c.offset);
            }
        }
        Ok(Self {
            cone: cone.clone(),
            normals,
            offsets,
            signs: cone.signs_in_coords(),
        })
    }

    pub fn coord_dim(&self) -> usize {
        self.cone.coord_dim()
    }

    pub fn membership(&self, w: &[f64]) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(n, t)| dot(n, w) <= t + EPS_GEO)
            && self.signs.iter().all(|g| dot(g, w) <= EPS_GEO)
    }

    /// `sup {s ≥ 0 : s·v ∈ cell}` for a coordinate direction `v`.
    pub fn support_extent(&self, v: &[f64]) -> f64 {
        if self.signs.iter().any(|g| dot(g, v) > EPS_GEO) {
            return 0.0;
        }
        self.normals
            .iter()
            .zip(&self.offsets)
            .filter_map(|(n, t)| {
                let a = dot(n, v);
                (a > 0.0).then(|| t / a)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `sup ⟨y, w⟩` over the restricted cell (LP); `+∞` if unbounded.
    pub fn support(&self, y: &[f64]) -> f64 {
        let mut lp = LinearProgram::new(self.coord_dim(), Vars::Free).maximize(y);
        for (n, t) in self.normals.iter().zip(&self.offsets) {
            lp.push_le(n, *t);
        }
        for g in &self.signs {
            lp.push_le(g, 0.0);
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => value,
            LpOutcome::Unbounded { .. } => f64::INFINITY,
            LpOutcome::Infeasible => unreachable!("the origin is feasible"),
        }
    }

    /// Normals of the recession cone `{w : ⟨n, w⟩ ≤ 0}` of the finite system.
    pub fn recession_normals(&self) -> Vec<Vec<f64>> {
        self.normals.iter().chain(&self.signs).cloned().collect()
    }
}
