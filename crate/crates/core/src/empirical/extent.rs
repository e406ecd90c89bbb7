use serde::{Deserialize, Serialize};

use super::expm::matrix_exponential_flat;
use super::sample::SampleBatch;
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg::{self, norm};
use crate::zero_cell::{tangent_dim, TangentPoint};

/// Scan resolution of [`directional_extent_empirical`] as a fraction of `s_max`.
pub const SCAN_STEPS: usize = 1024;
/// Bisection stops once the bracket is this narrow.
pub const BISECT_TOL: f64 = 1e-6;
/// Default censoring level in scaled units.
pub const DEFAULT_S_MAX: f64 = 50.0;

/// `p ∈ n𝔛_n`: every sample point satisfies `exp(-C/n)ξ - x/n ∈ K`.
pub fn xn_membership(body: &ConvexBody, p: &TangentPoint, batch: &SampleBatch, n: usize) -> bool {
    assert!(n >= 1, "n must be positive");
    let (d, n) = (p.dim(), n as f64);
    let c: Vec<f64> = p.c.iter().map(|v| -v / n).collect();
    let m = matrix_exponential_flat(d, &c);
    let shift = linalg::scale(&p.x, 1.0 / n);
    let mut y = vec![0.0; d];
    batch.points.iter().all(|xi| {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..d).map(|j| m[(i, j)] * xi[j]).sum::<f64>() - shift[i];
        }
        body.contains(&y)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extent {
    pub value: f64,
    /// The predicate held all the way to `s_max`.
    pub censored: bool,
}

/// `sup {s ≤ s_max : s·direction ∈ n𝔛_n}`: scan at `s_max / 1024` up to the
/// first infeasible point, then bisect.
pub fn directional_extent_empirical(
    body: &ConvexBody,
    batch: &SampleBatch,
    n: usize,
    direction: &[f64],
    s_max: f64,
) -> Result<Extent> {
    let d = body.dim();
    if direction.len() != tangent_dim(d) {
        return Err(Error::DimensionMismatch {
            expected: tangent_dim(d),
            got: direction.len(),
        });
    }
    if (norm(direction) - 1.0).abs() > 1e-9 {
        return Err(Error::param("direction", "must be a unit vector"));
    }
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    if !(s_max.is_finite() && s_max > 0.0) {
        return Err(Error::param("s_max", "must be positive and finite"));
    }
    let feasible = |s: f64| {
        let p = TangentPoint::from_flat(d, &linalg::scale(direction, s)).expect("tangent dimension checked");
        xn_membership(body, &p, batch, n)
    };
    if !feasible(0.0) {
        return Err(Error::param("batch", "the origin must be feasible"));
    }
    let step = s_max / SCAN_STEPS as f64;
    let Some(k) = (1..=SCAN_STEPS).find(|&k| !feasible(k as f64 * step)) else {
        return Ok(Extent { value: s_max, censored: true });
    };
    let (mut lo, mut hi) = ((k - 1) as f64 * step, k as f64 * step);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Extent { value: lo, censored: false })
}
