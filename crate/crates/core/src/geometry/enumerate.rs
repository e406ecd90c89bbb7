//! Extreme-ray enumeration for polyhedral cones `{y : ⟨n_j, y⟩ ≤ 0}`.
//!
//! Dimensions are tiny, so rays are found by brute force: every subset of
//! `m - 1` constraints (with `m` the dimension of the pointed part) that
//! pins down a line yields a candidate, which is kept if it satisfies every
//! other constraint.

use itertools::Itertools;

use crate::linalg::{dot, norm, normalized, null_space, orthogonal_complement, scale};

const RANK_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Default)]
pub(crate) struct ConeVRep {
    /// Unit extreme rays of the pointed part, orthogonal to the lineality.
    pub rays: Vec<Vec<f64>>,
    /// Orthonormal basis of the lineality space.
    pub lineality: Vec<Vec<f64>>,
}

impl ConeVRep {
    /// Rays plus both signs of every lineality basis vector.
    pub fn generators(&self) -> Vec<Vec<f64>> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(scale(l, -1.0));
        }
        g
    }
}

pub(crate) fn push_unique(set: &mut Vec<Vec<f64>>, v: Vec<f64>, tol: f64) {
    if !set
        .iter()
        .any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() <= tol))
    {
        set.push(v);
    }
}

pub(crate) fn cone_h_to_v(normals: &[Vec<f64>], dim: usize) -> ConeVRep {
    let normals: Vec<Vec<f64>> = normals.iter().filter_map(|n| normalized(n)).collect();
    let lineality = null_space(&normals, dim, RANK_TOL);
    let q = orthogonal_complement(&lineality, dim);
    let m = q.len();
    if m == 0 {
        return ConeVRep {
            rays: Vec::new(),
            lineality,
        };
    }
    // Constraint normals expressed in the coordinates of L^⊥.
    let proj: Vec<Vec<f64>> = normals
        .iter()
        .map(|n| q.iter().map(|b| dot(n, b)).collect())
        .collect();
    let feasible = |r: &[f64]| proj.iter().all(|n| dot(n, r) <= FEAS_TOL);

    let mut rays_local: Vec<Vec<f64>> = Vec::new();
    let mut consider = |r: Vec<f64>| {
        for s in [1.0, -1.0] {
            let cand = scale(&r, s);
            if feasible(&cand) {
                push_unique(&mut rays_local, cand, DEDUP_TOL);
            }
        }
    };
    if m == 1 {
        consider(vec![1.0]);
    } else {
        for subset in (0..proj.len()).combinations(m - 1) {
            let rows: Vec<Vec<f64>> = subset.iter().map(|&i| proj[i].clone()).collect();
            let ns = null_space(&rows, m, RANK_TOL);
            if ns.len() == 1 {
                consider(ns.into_iter().next().expect("one null vector"));
            }
        }
    }
    let rays = rays_local
        .into_iter()
        .filter_map(|r| {
            let mut v = vec![0.0; dim];
            for (c, b) in r.iter().zip(&q) {
                crate::linalg::axpy(&mut v, *c, b);
            }
            normalized(&v)
        })
        .collect::<Vec<_>>();
    let mut unique = Vec::new();
    for r in rays {
        if norm(&r) > 0.0 {
            push_unique(&mut unique, r, DEDUP_TOL);
        }
    }
    ConeVRep {
        rays: unique,
        lineality,
    }
}
