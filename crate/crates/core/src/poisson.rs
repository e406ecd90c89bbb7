//! The Poisson process `P_K` on `(0, ∞) × Nor(K)`: Lebesgue intensity in `t`
//! scaled by `1/V_d(K)`, times surface measure on `∂K` with the attached
//! outer normal.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{support_function, ConvexBody, Direction, Polytope};
use crate::linalg::{self, dot, norm};
use crate::rng::{replicate_rng, Rng as StreamRng};

/// One point `(t, η, u)` of `P_K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalBundleMark {
    pub t: f64,
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonSample {
    /// Sorted by increasing `t`.
    pub marks: Vec<NormalBundleMark>,
    pub t_max: f64,
    pub rate: f64,
    pub seed: Option<u64>,
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(d - 2) * std::f64::consts::TAU / d as f64,
    }
}

/// Uniform direction on `S^{d-1}`.
pub fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = linalg::normalized(&g) {
            return u;
        }
    }
}

/// Draws `(η, u)` from normalised surface measure on `∂K`.
#[derive(Debug, Clone)]
pub enum BoundarySampler {
    Polytope {
        poly: Polytope,
        /// Cumulative facet areas.
        cumulative: Vec<f64>,
        volume: f64,
    },
    Ball {
        radius: f64,
        center: Vec<f64>,
    },
    HalfBall {
        radius: f64,
        axis: Vec<f64>,
        /// Orthonormal basis of `axis^⊥`.
        flat_basis: Vec<Vec<f64>>,
        cap_area: f64,
        flat_area: f64,
    },
}

impl BoundarySampler {
    pub fn new(body: &ConvexBody) -> Result<Self> {
        // The half-ball keeps the origin on its flat face, so only containment
        // is required here.
        if !body.contains(&vec![0.0; body.dim()]) {
            return Err(Error::OriginNotContained);
        }
        match body {
            ConvexBody::Polytope(p) => {
                if !p.is_full_dimensional() {
                    return Err(Error::InvalidBody("polytope must be full-dimensional".into()));
                }
                let mut cumulative = Vec::with_capacity(p.facets().len());
                let mut acc = 0.0;
                for i in 0..p.facets().len() {
                    acc += p.facet_area(i)?;
                    cumulative.push(acc);
                }
                Ok(Self::Polytope {
                    poly: p.clone(),
                    cumulative,
                    volume: p.volume()?,
                })
            }
            ConvexBody::Ball { radius, center } => Ok(Self::Ball {
                radius: *radius,
                center: center.clone(),
            }),
            ConvexBody::HalfBall { radius, axis } => {
                let d = axis.len();
                let r = *radius;
                let cap_area = 0.5 * d as f64 * unit_ball_volume(d) * r.powi(d as i32 - 1);
                let flat_area = unit_ball_volume(d - 1) * r.powi(d as i32 - 1);
                Ok(Self::HalfBall {
                    radius: r,
                    axis: axis.clone(),
                    flat_basis: linalg::orthogonal_complement(&[axis.clone()], d),
                    cap_area,
                    flat_area,
                })
            }
            other => Err(Error::Unsupported(format!(
                "boundary sampling of a {}",
                other.kind_name()
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Polytope { poly, .. } => poly.dim(),
            Self::Ball { center, .. } => center.len(),
            Self::HalfBall { axis, .. } => axis.len(),
        }
    }

    pub fn surface_area(&self) -> f64 {
        match self {
            Self::Polytope { cumulative, .. } => *cumulative.last().unwrap_or(&0.0),
            Self::Ball { radius, center } => {
                let d = center.len();
                d as f64 * unit_ball_volume(d) * radius.powi(d as i32 - 1)
            }
            Self::HalfBall {
                cap_area, flat_area, ..
            } => cap_area + flat_area,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Self::Polytope { volume, .. } => *volume,
            Self::Ball { radius, center } => {
                let d = center.len();
                unit_ball_volume(d) * radius.powi(d as i32)
            }
            Self::HalfBall { radius, axis, .. } => {
                let d = axis.len();
                0.5 * unit_ball_volume(d) * radius.powi(d as i32)
            }
        }
    }

    /// Intensity of `t`: `|∂K| / V_d(K)`.
    pub fn rate(&self) -> f64 {
        self.surface_area() / self.volume()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
        match self {
            Self::Polytope { poly, cumulative, .. } => {
                let total = *cumulative.last().expect("polytope has facets");
                let pick = rng.random::<f64>() * total;
                let i = cumulative.partition_point(|&c| c <= pick).min(cumulative.len() - 1);
                (poly.sample_facet(i, rng), poly.facets()[i].normal.clone())
            }
            Self::Ball { radius, center } => {
                let u = random_unit(center.len(), rng);
                let eta = linalg::add(center, &linalg::scale(&u, *radius));
                (eta, u)
            }
            Self::HalfBall {
                radius,
                axis,
                flat_basis,
                cap_area,
                flat_area,
            } => {
                let d = axis.len();
                if rng.random::<f64>() * (cap_area + flat_area) < *cap_area {
                    let mut u = random_unit(d, rng);
                    let a = dot(&u, axis);
                    if a < 0.0 {
                        linalg::axpy(&mut u, -2.0 * a, axis);
                    }
                    (linalg::scale(&u, *radius), u)
                } else {
                    let k = d - 1;
                    let dir = random_unit(k, rng);
                    let rho = radius * rng.random::<f64>().powf(1.0 / k as f64);
                    let mut eta = vec![0.0; d];
                    for (c, b) in dir.iter().zip(flat_basis) {
                        linalg::axpy(&mut eta, rho * c, b);
                    }
                    (eta, linalg::scale(axis, -1.0))
                }
            }
        }
    }
}

/// Marks with `t ∈ (0, t_max]`, sorted by `t`.
pub fn sample_pk_with<R: Rng + ?Sized>(sampler: &BoundarySampler, t_max: f64, rng: &mut R) -> Vec<NormalBundleMark> {
    let mean = sampler.rate() * t_max;
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("positive finite mean").sample(rng) as usize
    } else {
        0
    };
    let mut ts: Vec<f64> = (0..count).map(|_| t_max * (1.0 - rng.random::<f64>())).collect();
    ts.sort_by(f64::total_cmp);
    ts.into_iter()
        .map(|t| {
            let (eta, u) = sampler.sample(rng);
            NormalBundleMark { t, eta, u }
        })
        .collect()
}

pub fn sample_pk(body: &ConvexBody, t_max: f64, seed: u64) -> Result<PoissonSample> {
    let sampler = BoundarySampler::new(body)?;
    let mut rng: StreamRng = replicate_rng(seed, 0);
    sample_pk_seeded(&sampler, t_max, seed, &mut rng)
}

pub(crate) fn sample_pk_seeded<R: Rng + ?Sized>(
    sampler: &BoundarySampler,
    t_max: f64,
    seed: u64,
    rng: &mut R,
) -> Result<PoissonSample> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::param("t_max", "must be positive and finite"));
    }
    Ok(PoissonSample {
        marks: sample_pk_with(sampler, t_max, rng),
        t_max,
        rate: sampler.rate(),
        seed: Some(seed),
    })
}

/// `(η, u) ∈ Nor(K)`: `η` on the boundary and `⟨η, u⟩ = h(K, u)`.
pub fn mark_is_valid(body: &ConvexBody, m: &NormalBundleMark) -> bool {
    let Ok(u) = Direction::new(&m.u) else {
        return false;
    };
    (norm(&m.u) - 1.0).abs() <= 1e-12
        && m.t > 0.0
        && body.violation(&m.eta).abs() <= crate::EPS_GEO
        && (dot(&m.eta, &m.u) - support_function(body, &u)).abs() <= crate::EPS_GEO
}
