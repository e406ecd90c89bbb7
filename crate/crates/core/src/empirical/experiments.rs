use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::extent::{directional_extent_empirical, xn_membership, Extent, DEFAULT_S_MAX};
use super::sample::uniform_sample_with;
use super::stats::{exp_cdf, ks_one_sample, ks_two_sample, spearman, weighted_linear_fit, LinearFit};
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::linalg;
use crate::poisson::{sample_pk_with, unit_ball_volume, BoundarySampler};
use crate::report::ExperimentReport;
use crate::rng::{replicate_rng, Rng};
use crate::zero_cell::{
    build_zero_cell_with, is_bounded, recession_in_cone, tangent_norm, ConeSpec, HalfSpaceSystem, TangentPoint,
};

/// Stream index for replicate `i` of part `part`, so the parts of one
/// experiment never share random numbers.
fn stream(part: u64, i: usize) -> u64 {
    (part << 40) | i as u64
}

fn replicate_seeds(seed: u64, part: u64, reps: usize) -> impl IndexedParallelIterator<Item = Rng> {
    (0..reps).into_par_iter().map(move |i| replicate_rng(seed, stream(part, i)))
}

/// Unit direction of `C = c·[[0, 1], [-1, 0]]` in the tangent space of the
/// plane; the coordinate along it is `c·√2`.
pub fn so2_direction() -> Vec<f64> {
    ConeSpec::preset("skew", 2).expect("preset").basis()[0].clone()
}

/// `(0, c·[[0, 1], [-1, 0]])`.
pub fn so2_point(c: f64) -> TangentPoint {
    TangentPoint::new(vec![0.0; 2], vec![0.0, c, -c, 0.0]).expect("2×2")
}

/// Extent of a limit cell along `v`, censored at the window.
fn cell_extent(sys: &HalfSpaceSystem, v: &[f64], window: f64) -> Extent {
    let s = sys.ray_extent(v);
    if s > window {
        Extent {
            value: window,
            censored: true,
        }
    } else {
        Extent {
            value: s,
            censored: false,
        }
    }
}

fn values(e: &[Extent], scale: f64) -> Vec<f64> {
    e.iter().map(|x| x.value * scale).collect()
}

fn censored(e: &[Extent]) -> f64 {
    e.iter().filter(|x| x.censored).count() as f64
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Limit-cell endpoints `(ζ′, ζ″)` of the rotation segment for the square,
/// in units of the rotation angle `c`.
pub fn so2_limit_endpoints(reps: usize, window: f64, seed: u64) -> Result<Vec<(Extent, Extent)>> {
    let body = ConvexBody::square();
    let sampler = BoundarySampler::new(&body)?;
    let v = so2_direction();
    let mv = linalg::scale(&v, -1.0);
    let k = std::f64::consts::FRAC_1_SQRT_2;
    replicate_seeds(seed, 0, reps)
        .map(|mut rng| {
            let sys = build_zero_cell_with(&body, &sampler, window, &mut rng)?;
            let (a, b) = (cell_extent(&sys, &mv, window), cell_extent(&sys, &v, window));
            Ok((
                Extent { value: a.value * k, ..a },
                Extent { value: b.value * k, ..b },
            ))
        })
        .collect()
}

/// Largest rotation angles `c/n` (either sense) keeping `n` uniform points of
/// the square inside it, scaled by `n`. Since `n𝔛_n` approaches the
/// reflected cell, the extent along `+v` pairs with `ζ′` and vice versa.
pub fn so2_finite_extents(n: usize, reps: usize, s_max: f64, seed: u64) -> Result<Vec<(Extent, Extent)>> {
    let body = ConvexBody::square();
    let mv = so2_direction();
    let v = linalg::scale(&mv, -1.0);
    let k = std::f64::consts::FRAC_1_SQRT_2;
    replicate_seeds(seed, 1, reps)
        .map(|mut rng| {
            let batch = uniform_sample_with(&body, n, &mut rng)?;
            let a = directional_extent_empirical(&body, &batch, n, &mv, s_max)?;
            let b = directional_extent_empirical(&body, &batch, n, &v, s_max)?;
            Ok((
                Extent { value: a.value * k, ..a },
                Extent { value: b.value * k, ..b },
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct So2Config {
    pub n: usize,
    pub finite_reps: usize,
    pub limit_reps: usize,
    pub window: f64,
    pub s_max: f64,
    pub seed: u64,
}

impl Default for So2Config {
    fn default() -> Self {
        Self {
            n: 2000,
            finite_reps: 2000,
            limit_reps: 10_000,
            window: 50.0,
            s_max: DEFAULT_S_MAX,
            seed: 0,
        }
    }
}

/// Rotation segment `[-ζ′, ζ″]` of the square: limit-cell simulation against
/// the mean-one exponential law, independence of the endpoints, and
/// agreement of the finite-n rotation extents with the limit cell.
pub fn so2_square_experiment(cfg: &So2Config) -> Result<ExperimentReport> {
    if cfg.n == 0 || cfg.finite_reps < 2 || cfg.limit_reps < 2 {
        return Err(Error::param("so2-square", "n must be positive and both replicate counts at least 2"));
    }
    let mut rep = ExperimentReport::new("so2-square", cfg, cfg.seed, cfg.limit_reps + cfg.finite_reps);
    let limit = so2_limit_endpoints(cfg.limit_reps, cfg.window, cfg.seed)?;
    let (lm, lp): (Vec<Extent>, Vec<Extent>) = limit.into_iter().unzip();
    let (zm, zp) = (values(&lm, 1.0), values(&lp, 1.0));

    let exp1 = exp_cdf(1.0);
    let ks_p = ks_one_sample(&zp, &exp1)?;
    let ks_m = ks_one_sample(&zm, &exp1)?;
    let rho = spearman(&zm, &zp)?;
    rep.stat("limit_mean_zeta_minus", mean(&zm));
    rep.stat("limit_mean_zeta_plus", mean(&zp));
    rep.stat("limit_ks_pvalue_zeta_plus_exp1", ks_p.p_value);
    rep.stat("limit_ks_pvalue_zeta_minus_exp1", ks_m.p_value);
    rep.stat("limit_censored", censored(&lm) + censored(&lp));
    // the law the simulation actually follows: mean 2
    rep.stat("limit_ks_zeta_plus_exp_mean2", ks_one_sample(&zp, exp_cdf(2.0))?.statistic);
    rep.stat("limit_ks_zeta_minus_exp_mean2", ks_one_sample(&zm, exp_cdf(2.0))?.statistic);
    rep.check("limit_ks_zeta_plus_exp1", ks_p.statistic, 0.02);
    rep.check("limit_ks_zeta_minus_exp1", ks_m.statistic, 0.02);
    rep.check("limit_abs_spearman", rho.abs(), 0.03);

    let finite = so2_finite_extents(cfg.n, cfg.finite_reps, cfg.s_max, cfg.seed)?;
    let (fm, fp): (Vec<Extent>, Vec<Extent>) = finite.into_iter().unzip();
    let (cm, cp) = (values(&fm, 1.0), values(&fp, 1.0));
    let pooled_f: Vec<f64> = cm.iter().chain(&cp).copied().collect();
    let pooled_l: Vec<f64> = zm.iter().chain(&zp).copied().collect();
    let two = ks_two_sample(&pooled_f, &pooled_l)?;
    rep.stat("finite_mean_zeta_minus", mean(&cm));
    rep.stat("finite_mean_zeta_plus", mean(&cp));
    rep.stat("finite_censored", censored(&fm) + censored(&fp));
    rep.stat("finite_vs_limit_ks_pvalue", two.p_value);
    rep.stat("finite_ks_exp_mean2", ks_one_sample(&pooled_f, exp_cdf(2.0))?.statistic);
    rep.check("finite_vs_limit_ks", two.statistic, 0.05);

    rep.add_series("limit", vec![("zeta_minus", zm), ("zeta_plus", zp)]);
    rep.add_series("finite", vec![("zeta_minus", cm), ("zeta_plus", cp)]);
    Ok(rep.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationBoxConfig {
    pub reps: usize,
    pub finite_n: usize,
    pub finite_reps: usize,
    pub window: f64,
    pub s_max: f64,
    pub seed: u64,
}

impl Default for TranslationBoxConfig {
    fn default() -> Self {
        Self {
            reps: 10_000,
            finite_n: 5000,
            finite_reps: 2000,
            window: 50.0,
            s_max: DEFAULT_S_MAX,
            seed: 0,
        }
    }
}

/// `+e₁, +e₂, -e₁, -e₂` in the tangent space of the plane.
fn box_directions() -> [Vec<f64>; 4] {
    let e = |i: usize, s: f64| linalg::scale(&linalg::unit(6, i), s);
    [e(0, 1.0), e(1, 1.0), e(0, -1.0), e(1, -1.0)]
}

const BOX_NAMES: [&str; 4] = ["plus_e1", "plus_e2", "minus_e1", "minus_e2"];

/// Translations-only limit cell of the square: the box `[-T₃, T₁] × [-T₄, T₂]`
/// with i.i.d. rate-1/2 exponential extents. Each replicate also evaluates the
/// extents straight from the marks (first arrival per facet) and counts
/// disagreements.
pub fn translation_box_limit(reps: usize, window: f64, seed: u64) -> Result<(Vec<[Extent; 4]>, usize)> {
    let body = ConvexBody::square();
    let sampler = BoundarySampler::new(&body)?;
    let cone = ConeSpec::preset("translations", 2)?;
    let dirs = box_directions();
    let rows: Vec<([Extent; 4], usize)> = replicate_seeds(seed, 2, reps)
        .map(|mut rng| {
            let sys = build_zero_cell_with(&body, &sampler, window, &mut rng)?;
            let mut out = [Extent {
                value: 0.0,
                censored: false,
            }; 4];
            let mut mismatches = 0;
            for (k, v) in dirs.iter().enumerate() {
                let s = sys.support_extent(v, &cone)?;
                out[k] = Extent {
                    value: s.min(window),
                    censored: s > window,
                };
                let first = sys
                    .marks
                    .iter()
                    .filter(|m| linalg::max_abs_diff(&m.u, &v[..2]) < 1e-12)
                    .map(|m| m.t)
                    .fold(f64::INFINITY, f64::min);
                if s <= window && (first - s).abs() > 1e-12 * (1.0 + s) {
                    mismatches += 1;
                }
            }
            Ok((out, mismatches))
        })
        .collect::<Result<_>>()?;
    let mismatches = rows.iter().map(|r| r.1).sum();
    Ok((rows.into_iter().map(|r| r.0).collect(), mismatches))
}

/// Scaled extents of `n(K ⊖ Ξ_n)`, reflected so that column `k` matches
/// column `k` of the limit cell.
pub fn translation_box_finite(n: usize, reps: usize, s_max: f64, seed: u64) -> Result<Vec<[Extent; 4]>> {
    let body = ConvexBody::square();
    let dirs = box_directions().map(|v| linalg::scale(&v, -1.0));
    replicate_seeds(seed, 3, reps)
        .map(|mut rng| {
            let batch = uniform_sample_with(&body, n, &mut rng)?;
            let mut out = [Extent {
                value: 0.0,
                censored: false,
            }; 4];
            for (k, v) in dirs.iter().enumerate() {
                out[k] = directional_extent_empirical(&body, &batch, n, v, s_max)?;
            }
            Ok(out)
        })
        .collect()
}

pub fn translation_box_experiment(cfg: &TranslationBoxConfig) -> Result<ExperimentReport> {
    if cfg.reps < 2 || cfg.finite_n == 0 || cfg.finite_reps < 2 {
        return Err(Error::param("translation-box", "replicate counts must be at least 2 and n positive"));
    }
    let mut rep = ExperimentReport::new("translation-box", cfg, cfg.seed, cfg.reps + cfg.finite_reps);
    let (limit, mismatches) = translation_box_limit(cfg.reps, cfg.window, cfg.seed)?;
    let cols: Vec<Vec<f64>> = (0..4).map(|k| limit.iter().map(|r| r[k].value).collect()).collect();
    let rate_half = exp_cdf(2.0);
    for (k, name) in BOX_NAMES.iter().enumerate() {
        let ks = ks_one_sample(&cols[k], &rate_half)?;
        rep.stat(&format!("limit_mean_{name}"), mean(&cols[k]));
        rep.check(&format!("limit_ks_{name}"), ks.statistic, 0.02);
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let rho = spearman(&cols[i], &cols[j])?;
            rep.check(&format!("limit_abs_spearman_{}_{}", BOX_NAMES[i], BOX_NAMES[j]), rho.abs(), 0.03);
        }
    }
    rep.stat("limit_censored", limit.iter().flatten().filter(|e| e.censored).count() as f64);
    // analytic oracle: the extent is the first arrival of the facet's marks
    rep.check("limit_first_arrival_mismatches", mismatches as f64, 0.5);

    let finite = translation_box_finite(cfg.finite_n, cfg.finite_reps, cfg.s_max, cfg.seed)?;
    let fcols: Vec<Vec<f64>> = (0..4).map(|k| finite.iter().map(|r| r[k].value).collect()).collect();
    for (k, name) in BOX_NAMES.iter().enumerate() {
        let ks = ks_one_sample(&fcols[k], &rate_half)?;
        rep.stat(&format!("finite_mean_{name}"), mean(&fcols[k]));
        rep.check(&format!("finite_ks_{name}"), ks.statistic, 0.05);
    }
    rep.add_series("limit", BOX_NAMES.iter().copied().zip(cols).collect());
    rep.add_series("finite", BOX_NAMES.iter().copied().zip(fcols).collect());
    Ok(rep.finish())
}

/// Source of random cells for the inclusion functional.
#[derive(Debug, Clone)]
pub enum CellSampler {
    /// `ℨ_K`, simulated exactly within the window.
    Limit { body: ConvexBody, window: f64 },
    /// `n𝔛_n` for a fresh uniform sample of size `n`.
    Finite { body: ConvexBody, n: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionEstimate {
    /// Frequency of `L ⊂ X`.
    pub all: f64,
    /// Frequency of `p ∈ X` for each `p ∈ L`.
    pub per_point: Vec<f64>,
    pub replicates: usize,
}

/// Monte Carlo estimate of `P{L ⊂ X}`.
pub fn inclusion_functional_estimate(
    sampler: &CellSampler,
    l: &[TangentPoint],
    reps: usize,
    seed: u64,
) -> Result<InclusionEstimate> {
    if reps == 0 {
        return Err(Error::param("reps", "must be positive"));
    }
    let body = match sampler {
        CellSampler::Limit { body, .. } | CellSampler::Finite { body, .. } => body,
    };
    if let Some(p) = l.iter().find(|p| p.dim() != body.dim()) {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: p.dim(),
        });
    }
    let hits: Vec<Vec<bool>> = match sampler {
        CellSampler::Limit { body, window } => {
            // exact for every point of L inside the window
            let needed = l.iter().map(|p| tangent_norm(&p.flatten())).fold(0.0, f64::max);
            if needed > *window {
                return Err(Error::param("window", "must cover every test point"));
            }
            let bs = BoundarySampler::new(body)?;
            replicate_seeds(seed, 4, reps)
                .map(|mut rng| {
                    let sys = build_zero_cell_with(body, &bs, needed, &mut rng)?;
                    Ok(l.iter().map(|p| sys.contains(p)).collect())
                })
                .collect::<Result<_>>()?
        }
        CellSampler::Finite { body, n } => {
            if *n == 0 {
                return Err(Error::param("n", "must be positive"));
            }
            replicate_seeds(seed, 5, reps)
                .map(|mut rng| {
                    let batch = uniform_sample_with(body, *n, &mut rng)?;
                    Ok(l.iter().map(|p| xn_membership(body, p, &batch, *n)).collect())
                })
                .collect::<Result<_>>()?
        }
    };
    let r = reps as f64;
    Ok(InclusionEstimate {
        all: hits.iter().filter(|h| h.iter().all(|&b| b)).count() as f64 / r,
        per_point: (0..l.len())
            .map(|j| hits.iter().filter(|h| h[j]).count() as f64 / r)
            .collect(),
        replicates: reps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionConfig {
    pub n: usize,
    pub reps: usize,
    /// Test set; defaults to the rotation points `c = 0.5, 1`.
    pub points: Vec<TangentPoint>,
    pub seed: u64,
}

impl Default for InclusionConfig {
    fn default() -> Self {
        Self {
            n: 2000,
            reps: 10_000,
            points: vec![so2_point(0.5), so2_point(1.0)],
            seed: 0,
        }
    }
}

/// `P{L ⊂ n𝔛_n}` against `P{L ⊂ ℨ_K}` for the square.
pub fn inclusion_experiment(cfg: &InclusionConfig) -> Result<ExperimentReport> {
    if cfg.points.is_empty() {
        return Err(Error::param("points", "test set is empty"));
    }
    let body = ConvexBody::square();
    let mut rep = ExperimentReport::new("inclusion", cfg, cfg.seed, 2 * cfg.reps);
    let window = cfg.points.iter().map(|p| tangent_norm(&p.flatten())).fold(0.0, f64::max);
    let lim = inclusion_functional_estimate(
        &CellSampler::Limit {
            body: body.clone(),
            window,
        },
        &cfg.points,
        cfg.reps,
        cfg.seed,
    )?;
    let fin = inclusion_functional_estimate(&CellSampler::Finite { body, n: cfg.n }, &cfg.points, cfg.reps, cfg.seed)?;
    rep.stat("limit_frequency", lim.all);
    rep.stat("finite_frequency", fin.all);
    rep.check("abs_frequency_difference", (lim.all - fin.all).abs(), 0.03);
    rep.add_series(
        "per_point",
        vec![("limit", lim.per_point.clone()), ("finite", fin.per_point.clone())],
    );
    Ok(rep.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecessionConfig {
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
}

impl Default for RecessionConfig {
    fn default() -> Self {
        Self {
            n: 500,
            reps: 200,
            seed: 0,
        }
    }
}

/// Deterministic recession and boundedness checks, plus feasibility of
/// `(0, μI)`, `μ ≤ 0`, in limit cells and of its reflection in `n𝔛_n`, for
/// the square and the disc.
pub fn recession_experiment(cfg: &RecessionConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("recession", cfg, cfg.seed, cfg.reps);
    let fail = |ok: bool| if ok { 0.0 } else { 1.0 };
    for d in [2usize, 3] {
        let ball = ConvexBody::ball(d, 1.0);
        let rr = recession_in_cone(&ball, &ConeSpec::preset("diagonal", d)?)?;
        let orthant = crate::geometry::PolyhedralCone::from_rays(
            d,
            &(0..d).map(|i| linalg::scale(&linalg::unit(d, i), -1.0)).collect::<Vec<_>>(),
        )?;
        rep.check(&format!("diagonal_orthant_d{d}"), fail(rr.exact && rr.cone.equivalent(&orthant)), 0.5);
        let full = is_bounded(&ball, &ConeSpec::preset("full", d)?)?;
        rep.check(&format!("ball_full_unbounded_d{d}"), fail(!full.bounded && full.exact), 0.5);
        let st = is_bounded(&ball, &ConeSpec::preset("sym-traceless", d)?)?;
        rep.check(&format!("ball_sym_traceless_bounded_d{d}"), fail(st.bounded && st.exact), 0.5);
    }
    // (0, μI) ∈ ℨ_K for μ ≤ 0, so (0, -μI) ∈ n𝔛_n
    let mus = [0.0, -0.5, -3.0, -100.0];
    for (name, body) in [("square", ConvexBody::square()), ("disc", ConvexBody::ball(2, 1.0))] {
        let bs = BoundarySampler::new(&body)?;
        let outside: usize = replicate_seeds(cfg.seed, 8, cfg.reps)
            .map(|mut rng| {
                let sys = build_zero_cell_with(&body, &bs, 150.0, &mut rng)?;
                Ok(mus.iter().filter(|&&mu| !sys.contains(&TangentPoint::scalar(2, mu))).count())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        rep.check(&format!("limit_scalar_feasibility_failures_{name}"), outside as f64, 0.5);
        let failures: usize = replicate_seeds(cfg.seed, 6, cfg.reps)
            .map(|mut rng| {
                let n = rng.random_range(1..=cfg.n.max(1));
                let batch = uniform_sample_with(&body, n, &mut rng)?;
                Ok(mus
                    .iter()
                    .filter(|&&mu| !xn_membership(&body, &TangentPoint::scalar(2, -mu), &batch, n))
                    .count())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        rep.check(&format!("finite_scalar_feasibility_failures_{name}"), failures as f64, 0.5);
    }
    Ok(rep.finish())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeEstimate {
    pub fit: LinearFit,
    /// Smallest radius at which the truncated process is exact.
    pub rho_min: f64,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Log-log slope of the intensity of `{η′/t}` over marks of the half-ball
/// on its flat face. The intensity is `c_d‖x‖^{-d}` on `R^{d-1}`; only the
/// exponent is estimated.
pub fn cones_intensity_slope(d: usize, points: usize, bins: usize, decades: f64, seed: u64) -> Result<SlopeEstimate> {
    if d < 2 || points == 0 || bins < 3 || decades <= 0.0 {
        return Err(Error::param("cones", "need d ≥ 2, points > 0, bins ≥ 3, decades > 0"));
    }
    let body = ConvexBody::half_ball(d, 1.0);
    let sampler = BoundarySampler::new(&body)?;
    let BoundarySampler::HalfBall { flat_area, .. } = &sampler else { unreachable!() };
    let flat_rate = flat_area / sampler.volume();
    let mut t_max = 1.2 * points as f64 / flat_rate;
    let mut attempt = 0;
    let flat = loop {
        let mut rng = replicate_rng(seed, stream(7, attempt));
        let flat: Vec<(f64, Vec<f64>)> = sample_pk_with(&sampler, t_max, &mut rng)
            .into_iter()
            .filter(|m| m.u[0] < -0.5)
            .map(|m| (m.t, m.eta[1..].to_vec()))
            .collect();
        if flat.len() >= points {
            break flat;
        }
        t_max *= 1.5;
        attempt += 1;
    };
    // marks come sorted by t; the first `points` are exact up to their last t
    let t_cut = flat[points - 1].0;
    let rho_min = 1.0 / t_cut;
    let edges: Vec<f64> = (0..=bins)
        .map(|k| rho_min * 10f64.powf(decades * k as f64 / bins as f64))
        .collect();
    let mut counts = vec![0usize; bins];
    for (t, eta) in &flat[..points] {
        let rho = linalg::norm(eta) / t;
        if rho < edges[0] || rho >= edges[bins] {
            continue;
        }
        let k = ((rho / rho_min).log10() / decades * bins as f64).floor() as usize;
        counts[k.min(bins - 1)] += 1;
    }
    let k = d - 1;
    let shell = |a: f64, b: f64| unit_ball_volume(k) * (b.powi(k as i32) - a.powi(k as i32));
    let (mut xs, mut ys, mut ws) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..bins {
        if counts[i] == 0 {
            continue;
        }
        let (a, b) = (edges[i], edges[i + 1]);
        xs.push(a.ln());
        ys.push((counts[i] as f64 / shell(a, b)).ln());
        ws.push(counts[i] as f64);
    }
    Ok(SlopeEstimate {
        fit: weighted_linear_fit(&xs, &ys, &ws)?,
        rho_min,
        bin_edges: edges,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConesConfig {
    pub dims: Vec<usize>,
    pub points: usize,
    pub bins: usize,
    pub decades: f64,
    pub seed: u64,
}

impl Default for ConesConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3],
            points: 100_000,
            bins: 20,
            decades: 2.0,
            seed: 0,
        }
    }
}

pub fn cones_experiment(cfg: &ConesConfig) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("cones", cfg, cfg.seed, cfg.points * cfg.dims.len());
    for &d in &cfg.dims {
        let est = cones_intensity_slope(d, cfg.points, cfg.bins, cfg.decades, cfg.seed)?;
        rep.stat(&format!("slope_d{d}"), est.fit.slope);
        rep.stat(&format!("slope_stderr_d{d}"), est.fit.slope_stderr);
        rep.check(&format!("abs_slope_error_d{d}"), (est.fit.slope + d as f64).abs(), 0.1);
        rep.add_series(
            &format!("bins_d{d}"),
            vec![
                ("lower", est.bin_edges[..cfg.bins].to_vec()),
                ("upper", est.bin_edges[1..].to_vec()),
                ("count", est.counts.iter().map(|&c| c as f64).collect()),
            ],
        );
    }
    Ok(rep.finish())
}
