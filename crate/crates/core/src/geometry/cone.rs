use serde::{Deserialize, Serialize};

use super::enumerate::cone_h_to_v;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, normalized};
use crate::EPS_GEO;

/// Closed convex polyhedral cone, stored both as generators (`rays`, with
/// lineality directions listed in both signs) and as unit outer normals
/// (`{x : ⟨n, x⟩ ≤ 0}` for every normal).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyhedralCone {
    dim: usize,
    rays: Vec<Vec<f64>>,
    normals: Vec<Vec<f64>>,
}

impl PolyhedralCone {
    pub fn from_normals(dim: usize, normals: &[Vec<f64>]) -> Result<Self> {
        check_dims(dim, normals)?;
        let rays = cone_h_to_v(normals, dim).generators();
        let normals = cone_h_to_v(&rays, dim).generators();
        Ok(Self { dim, rays, normals })
    }

    pub fn from_rays(dim: usize, rays: &[Vec<f64>]) -> Result<Self> {
        check_dims(dim, rays)?;
        let normals = cone_h_to_v(rays, dim).generators();
        let rays = cone_h_to_v(&normals, dim).generators();
        Ok(Self { dim, rays, normals })
    }

    pub fn whole_space(dim: usize) -> Self {
        Self::from_normals(dim, &[]).expect("no normals to check")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn is_whole_space(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// `max ⟨n, p⟩` over normals; `-∞` for the whole space.
    pub fn violation(&self, p: &[f64]) -> f64 {
        self.normals
            .iter()
            .map(|n| dot(n, p))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.violation(p) <= EPS_GEO * (1.0 + norm(p))
    }

    /// `0` if `u` lies in the polar cone, `+∞` otherwise.
    pub fn support(&self, u: &[f64]) -> f64 {
        if self.rays.iter().all(|r| dot(r, u) <= EPS_GEO) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// Polar cone `{y : ⟨x, y⟩ ≤ 0 for all x in the cone}`.
    pub fn polar(&self) -> Self {
        Self {
            dim: self.dim,
            rays: self.normals.clone(),
            normals: self.rays.clone(),
        }
    }

    /// Both cones contain each other's generators.
    pub fn equivalent(&self, other: &PolyhedralCone) -> bool {
        self.dim == other.dim
            && self.rays.iter().all(|r| other.contains(r))
            && other.rays.iter().all(|r| self.contains(r))
    }

    /// Unit directions of the generators.
    pub fn unit_rays(&self) -> Vec<Vec<f64>> {
        self.rays.iter().filter_map(|r| normalized(r)).collect()
    }
}

fn check_dims(dim: usize, vs: &[Vec<f64>]) -> Result<()> {
    for v in vs {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    Ok(())
}
