use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg;
use crate::poisson::random_unit;
use crate::rng::replicate_rng;

/// `n` independent uniform points of `K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub points: Vec<Vec<f64>>,
    pub seed: Option<u64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The first `m` points, for nested samples `Ξ_m ⊆ Ξ_n`.
    pub fn prefix(&self, m: usize) -> Self {
        Self {
            points: self.points[..m.min(self.len())].to_vec(),
            seed: self.seed,
        }
    }
}

pub fn uniform_sample(body: &ConvexBody, n: usize, seed: u64) -> Result<SampleBatch> {
    let mut rng = replicate_rng(seed, 0);
    let mut batch = uniform_sample_with(body, n, &mut rng)?;
    batch.seed = Some(seed);
    Ok(batch)
}

pub fn uniform_sample_with<R: Rng + ?Sized>(body: &ConvexBody, n: usize, rng: &mut R) -> Result<SampleBatch> {
    let draw: Box<dyn Fn(&mut R) -> Vec<f64> + '_> = match body {
        ConvexBody::Polytope(p) => {
            if !p.is_full_dimensional() {
                return Err(Error::InvalidBody("polytope must be full-dimensional".into()));
            }
            let (lo, hi) = p.bounding_box();
            Box::new(move |rng: &mut R| loop {
                let x: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| a + (b - a) * rng.random::<f64>()).collect();
                if p.contains(&x) {
                    return x;
                }
            })
        }
        ConvexBody::Ball { radius, center } => {
            let (r, c) = (*radius, center.clone());
            Box::new(move |rng: &mut R| ball_point(&c, r, rng))
        }
        ConvexBody::HalfBall { radius, axis } => {
            let (r, o) = (*radius, vec![0.0; axis.len()]);
            Box::new(move |rng: &mut R| loop {
                let x = ball_point(&o, r, rng);
                if linalg::dot(&x, axis) >= 0.0 {
                    return x;
                }
            })
        }
        other => return Err(Error::Unsupported(format!("uniform sampling of a {}", other.kind_name()))),
    };
    Ok(SampleBatch {
        points: (0..n).map(|_| draw(rng)).collect(),
        seed: None,
    })
}

/// Uniform direction times a radius with density `∝ ρ^{d-1}`.
fn ball_point<R: Rng + ?Sized>(center: &[f64], radius: f64, rng: &mut R) -> Vec<f64> {
    let d = center.len();
    let u = random_unit(d, rng);
    let rho = radius * rng.random::<f64>().powf(1.0 / d as f64);
    linalg::add(center, &linalg::scale(&u, rho))
}
