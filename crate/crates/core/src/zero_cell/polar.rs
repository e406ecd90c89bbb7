use serde::{Deserialize, Serialize};

use super::HalfSpaceSystem;
use crate::linalg::{dot, scale};
use crate::lp::{LinearProgram, LpOutcome, Vars};

/// `conv({0} ∪ {t⁻¹(u, N)})`, the polar of a finite zero-cell system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCellPolar {
    pub d: usize,
    pub points: Vec<Vec<f64>>,
}

impl ZeroCellPolar {
    pub fn from_system(sys: &HalfSpaceSystem) -> Self {
        Self {
            d: sys.d,
            points: sys
                .constraints
                .iter()
                .map(|c| scale(&c.normal, 1.0 / c.offset))
                .collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        super::tangent_dim(self.d)
    }

    /// `h(polar, y) = max(0, max_i ⟨p_i, y⟩)`.
    pub fn support(&self, y: &[f64]) -> f64 {
        self.points.iter().map(|p| dot(p, y)).fold(0.0, f64::max)
    }

    /// `q = Σ λ_i p_i` with `λ ≥ 0`, `Σ λ_i ≤ 1` (LP feasibility).
    pub fn contains(&self, q: &[f64]) -> bool {
        let m = self.points.len();
        let n = self.ambient_dim();
        let mut lp = LinearProgram::new(m, Vars::NonNegative);
        for k in 0..n {
            let row: Vec<f64> = self.points.iter().map(|p| p[k]).collect();
            lp.push_eq(&row, q[k]);
        }
        lp.push_le(&vec![1.0; m], 1.0);
        lp.solve().is_feasible()
    }

    /// Support in direction `(u, 0)` of the slice `{q ∈ polar : q_C = 0}`,
    /// i.e. the translation part of the polar at zero matrix component.
    pub fn translation_slice_support(&self, u: &[f64]) -> f64 {
        let d = self.d;
        let m = self.points.len();
        if m == 0 {
            return 0.0;
        }
        let obj: Vec<f64> = self.points.iter().map(|p| dot(&p[..d], u)).collect();
        let mut lp = LinearProgram::new(m, Vars::NonNegative).maximize(&obj);
        for k in d..self.ambient_dim() {
            let row: Vec<f64> = self.points.iter().map(|p| p[k]).collect();
            lp.push_eq(&row, 0.0);
        }
        lp.push_le(&vec![1.0; m], 1.0);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => value,
            _ => 0.0,
        }
    }
}
