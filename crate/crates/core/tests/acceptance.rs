//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::Instant;

use khull_core::empirical::stats::{exp_cdf, ks_one_sample};
use khull_core::empirical::{
    cones_intensity_slope, so2_square_experiment, translation_box_experiment, uniform_sample_with, xn_membership,
    So2Config, TranslationBoxConfig,
};
use khull_core::geometry::polar;
use khull_core::hull::{
    hull_full_affine, hull_linear_ball, hull_translations_scalings, k_hull_translations, positive_hull,
    spherical_hull_halfball, HullShape,
};
use khull_core::linalg::{self, dist, dot};
use khull_core::poisson::{random_unit, BoundarySampler, NormalBundleMark};
use khull_core::zero_cell::{
    build_zero_cell, build_zero_cell_with, halfspace_from_mark, is_bounded, recession_in_cone, ConeSpec,
    TangentPoint,
};
use khull_core::{ConvexBody, PolyhedralCone, Polytope, EPS_GEO};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn gauss(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn uniform_in(body: &ConvexBody, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    uniform_sample_with(body, n, rng).unwrap().points
}

fn exp_endpoint_law(report: &khull_core::report::ExperimentReport) -> Outcome {
    let c = |n: &str| report.check_named(n).unwrap();
    let (p, m, r) = (
        c("limit_ks_zeta_plus_exp1"),
        c("limit_ks_zeta_minus_exp1"),
        c("limit_abs_spearman"),
    );
    let s = &report.statistics;
    outcome(
        p.pass && m.pass && r.pass,
        format!(
            "KS(ζ″,Exp(1)) = {:.4}, KS(ζ′,Exp(1)) = {:.4} (< 0.02); |ρ| = {:.4} (< 0.03); means {:.3}/{:.3}; KS vs mean-2 exponential {:.4}/{:.4}",
            p.value,
            m.value,
            r.value,
            s["limit_mean_zeta_minus"],
            s["limit_mean_zeta_plus"],
            s["limit_ks_zeta_minus_exp_mean2"],
            s["limit_ks_zeta_plus_exp_mean2"],
        ),
    )
}

fn finite_n_convergence(report: &khull_core::report::ExperimentReport) -> Outcome {
    let k = report.check_named("finite_vs_limit_ks").unwrap();
    outcome(
        k.pass,
        format!(
            "two-sample KS = {:.4} (< 0.05), p = {:.3}; finite means {:.3}/{:.3}",
            k.value,
            report.statistics["finite_vs_limit_ks_pvalue"],
            report.statistics["finite_mean_zeta_minus"],
            report.statistics["finite_mean_zeta_plus"],
        ),
    )
}

fn translation_box() -> Outcome {
    let r = translation_box_experiment(&TranslationBoxConfig::default()).unwrap();
    let limit: Vec<_> = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("limit_ks") || c.name.starts_with("limit_abs_spearman"))
        .collect();
    let worst_ks = limit.iter().filter(|c| c.name.contains("_ks_")).map(|c| c.value).fold(0.0, f64::max);
    let worst_rho = limit.iter().filter(|c| c.name.contains("spearman")).map(|c| c.value).fold(0.0, f64::max);
    let mism = r.check_named("limit_first_arrival_mismatches").unwrap();
    outcome(
        limit.iter().all(|c| c.pass) && mism.pass,
        format!(
            "max KS vs Exp(1/2) = {worst_ks:.4} (< 0.02); max pairwise |ρ| = {worst_rho:.4} (< 0.03); first-arrival mismatches {}",
            mism.value
        ),
    )
}

fn scalings_identity() -> Outcome {
    let poly = Polytope::from_vertices(&[vec![-1.0, -0.5], vec![1.5, -1.0], vec![0.5, 1.0], vec![-0.8, 0.9]]).unwrap();
    let body = ConvexBody::Polytope(poly.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut mismatches = 0;
    let mut inside = 0;
    for seed in 0..20 {
        let s = build_zero_cell(&body, 3.0, seed).unwrap();
        for _ in 0..100 {
            let x = linalg::scale(&gauss(2, &mut rng), 0.3);
            let r = rng.random_range(0.0..0.6);
            let mut p = TangentPoint::scalar(2, r);
            p.x = x.clone();
            let lhs = s.contains(&p);
            // rK + x ⊆ Z_K, Z_K the zero cell {y : ⟨y, u⟩ ≤ t}
            let rhs = poly.vertices().iter().all(|v| {
                let y = linalg::add(&linalg::scale(v, r), &x);
                s.marks.iter().all(|m| dot(&y, &m.u) <= m.t + EPS_GEO)
            });
            mismatches += usize::from(lhs != rhs);
            inside += usize::from(lhs);
        }
    }
    outcome(mismatches == 0, format!("{mismatches} mismatches in 2000 (x, r) pairs ({inside} inside)"))
}

/// Jarvis march, counter-clockwise.
fn gift_wrap(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let start = points
        .iter()
        .min_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])))
        .unwrap()
        .clone();
    let mut hull = vec![start.clone()];
    let mut cur = start.clone();
    loop {
        let mut next = points[0].clone();
        for p in points {
            if next == cur {
                next = p.clone();
                continue;
            }
            let cross = (next[0] - cur[0]) * (p[1] - cur[1]) - (next[1] - cur[1]) * (p[0] - cur[0]);
            if cross < 0.0 || (cross == 0.0 && dist(&cur, p) > dist(&cur, &next)) {
                next = p.clone();
            }
        }
        if next == start {
            break;
        }
        hull.push(next.clone());
        cur = next;
    }
    hull
}

fn same_point_set(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    a.len() == b.len() && a.iter().all(|v| b.iter().any(|w| dist(v, w) == 0.0))
}

fn hull_oracle_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();

    // linear images of the centred ball: conv(A ∪ -A)
    for _ in 0..50 {
        let a: Vec<Vec<f64>> = (0..8).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        let mut sym = a.clone();
        sym.extend(a.iter().map(|p| linalg::scale(p, -1.0)));
        let h = hull_linear_ball(&a).unwrap();
        if !same_point_set(h.as_polytope().unwrap().vertices(), &gift_wrap(&sym)) {
            failures.push("linear-ball");
        }
    }
    // conv(A) against gift wrapping
    for _ in 0..50 {
        let a: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
        if !same_point_set(hull_full_affine(&a).unwrap().as_polytope().unwrap().vertices(), &gift_wrap(&a)) {
            failures.push("full-affine");
        }
    }
    // positive and spherical hulls against the extreme angles
    for _ in 0..50 {
        let angles: Vec<f64> = (0..5).map(|_| rng.random_range(-1.5..1.5)).collect();
        let radii: Vec<f64> = (0..5).map(|_| rng.random_range(0.1..1.0)).collect();
        let a: Vec<Vec<f64>> = angles.iter().zip(&radii).map(|(t, r)| vec![r * t.cos(), r * t.sin()]).collect();
        let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let pos = positive_hull(&a).unwrap();
        let sph = spherical_hull_halfball(&a).unwrap();
        for _ in 0..100 {
            let t = rng.random_range(-3.1..3.1);
            let rad: f64 = rng.random_range(0.0..1.5);
            if (t - lo).abs() < 1e-6 || (t - hi).abs() < 1e-6 || (rad - 1.0).abs() < 1e-6 {
                continue;
            }
            let y = [rad * t.cos(), rad * t.sin()];
            let in_sector = t >= lo && t <= hi;
            if pos.contains(&y) != in_sector {
                failures.push("positive");
            }
            if sph.contains(&y) != (in_sector && rad <= 1.0) {
                failures.push("spherical");
            }
        }
        if !matches!(sph.shape, HullShape::ConeInBall { .. }) {
            failures.push("spherical shape");
        }
    }
    // idempotence and the sandwich conv(A) ⊆ hull ⊆ K
    let pentagon = ConvexBody::Polytope(
        Polytope::from_vertices(
            &(0..5)
                .map(|k| {
                    let a = 0.3 + std::f64::consts::TAU * k as f64 / 5.0;
                    vec![1.2 * a.cos(), a.sin()]
                })
                .collect::<Vec<_>>(),
        )
        .unwrap(),
    );
    let mut drift: f64 = 0.0;
    for body in [ConvexBody::square(), pentagon, ConvexBody::Polytope(Polytope::hypercube(3, 1.0))] {
        let ConvexBody::Polytope(k) = &body else { unreachable!() };
        for _ in 0..10 {
            let a = uniform_in(&body, 4, &mut rng);
            let h = k_hull_translations(&body, &a).unwrap();
            let hp = h.as_polytope().unwrap();
            let mut dense = hp.vertices().to_vec();
            if hp.is_full_dimensional() {
                for i in 0..hp.facets().len() {
                    for _ in 0..30 {
                        dense.push(hp.sample_facet(i, &mut rng));
                    }
                }
            }
            let h2 = k_hull_translations(&body, &dense).unwrap();
            for f in k.facets() {
                drift = drift.max((h.support(&f.normal).unwrap() - h2.support(&f.normal).unwrap()).abs());
            }
            let conv = Polytope::from_vertices(&a).unwrap();
            for g in [h, hull_translations_scalings(&body, &a).unwrap()] {
                let gp = g.as_polytope().unwrap();
                if !conv.vertices().iter().all(|v| gp.contains(v)) || !gp.vertices().iter().all(|v| body.contains(v)) {
                    failures.push("sandwich");
                }
            }
        }
    }
    for d in [2usize, 3] {
        let ball = ConvexBody::ball(d, 1.0);
        for _ in 0..5 {
            let a = uniform_in(&ball, 3, &mut rng);
            let h = k_hull_translations(&ball, &a).unwrap();
            if !a.iter().all(|p| h.contains(p)) {
                failures.push("ball sandwich (A)");
            }
            for _ in 0..20 {
                let y = linalg::scale(&random_unit(d, &mut rng), 1.0 + 1e-6);
                if h.contains(&y) {
                    failures.push("ball sandwich (K)");
                }
            }
        }
    }
    if drift > 1e-6 {
        failures.push("idempotence");
    }
    failures.dedup();
    outcome(
        failures.is_empty(),
        format!("idempotence drift {drift:.2e} (≤ 1e-6); failures: {failures:?}"),
    )
}

fn recession_checks() -> Outcome {
    let mut bad = Vec::new();
    for d in [2usize, 3] {
        let ball = ConvexBody::ball(d, 1.0);
        let rr = recession_in_cone(&ball, &ConeSpec::preset("diagonal", d).unwrap()).unwrap();
        let orthant = PolyhedralCone::from_rays(
            d,
            &(0..d).map(|i| linalg::scale(&linalg::unit(d, i), -1.0)).collect::<Vec<_>>(),
        )
        .unwrap();
        if !(rr.exact && rr.cone.equivalent(&orthant)) {
            bad.push(format!("diagonal d={d}"));
        }
        let full = is_bounded(&ball, &ConeSpec::preset("full", d).unwrap()).unwrap();
        if full.bounded {
            bad.push(format!("ball/full d={d}"));
        }
        let st = is_bounded(&ball, &ConeSpec::preset("sym-traceless", d).unwrap()).unwrap();
        if !st.bounded {
            bad.push(format!("ball/sym-traceless d={d}"));
        }
    }
    // (0, μI), μ ≤ 0: in every limit cell, and reflected in every n𝔛_n
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mus = [0.0, -0.1, -1.0, -10.0, -1000.0];
    let mut cells = 0;
    for body in [ConvexBody::square(), ConvexBody::ball(2, 1.0), ConvexBody::ball(3, 1.0)] {
        let d = body.dim();
        let sampler = BoundarySampler::new(&body).unwrap();
        for _ in 0..50 {
            let sys = build_zero_cell_with(&body, &sampler, 20.0, &mut rng).unwrap();
            let n = rng.random_range(1..400);
            let batch = uniform_sample_with(&body, n, &mut rng).unwrap();
            for &mu in &mus {
                if !sys.contains(&TangentPoint::scalar(d, mu)) || !xn_membership(&body, &TangentPoint::scalar(d, -mu), &batch, n)
                {
                    bad.push(format!("scalar μ={mu}"));
                }
            }
            cells += 1;
        }
    }
    bad.dedup();
    outcome(bad.is_empty(), format!("{cells} cells and samples; failures: {bad:?}"))
}

fn geometry_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut polar_bad = 0;
    for _ in 0..100 {
        let d = rng.random_range(2..5);
        let u = random_unit(d, &mut rng);
        let t = rng.random_range(0.05..5.0);
        let seg = ConvexBody::Polytope(Polytope::from_vertices(&[vec![0.0; d], linalg::scale(&u, 1.0 / t)]).unwrap());
        match polar(&seg).unwrap() {
            ConvexBody::HalfSpace { normal, offset } => {
                if linalg::max_abs_diff(&normal, &u) > 1e-12 || (offset - t).abs() > 1e-12 * t {
                    polar_bad += 1;
                }
            }
            _ => polar_bad += 1,
        }
    }
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = rng.random_range(1..5);
        let x = gauss(d, &mut rng);
        let c = gauss(d * d, &mut rng);
        let eta = gauss(d, &mut rng);
        let u = random_unit(d, &mut rng);
        let m = NormalBundleMark {
            t: rng.random_range(0.1..3.0),
            eta: eta.clone(),
            u: u.clone(),
        };
        let p = TangentPoint::new(x.clone(), c).unwrap();
        let lhs = dot(&p.flatten(), &halfspace_from_mark(&m).normal);
        let rhs = dot(&p.apply(&eta), &u);
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
    }
    outcome(
        polar_bad == 0 && worst <= 1e-12,
        format!("polar mismatches {polar_bad}/100; flattening max relative error {worst:.2e} (≤ 1e-12)"),
    )
}

fn cones_exponent() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for d in [2usize, 3] {
        let est = cones_intensity_slope(d, 100_000, 20, 2.0, 105 + d as u64).unwrap();
        pass &= (est.fit.slope + d as f64).abs() <= 0.1;
        parts.push(format!("d={d}: slope {:.4} ± {:.4}", est.fit.slope, est.fit.slope_stderr));
    }
    outcome(pass, format!("{} (target -d ± 0.1)", parts.join("; ")))
}

fn main() {
    let mut all = true;
    let mut report = |name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        all &= o.pass;
        println!(
            "{} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    };
    let start = Instant::now();
    let so2 = so2_square_experiment(&So2Config::default()).unwrap();
    println!("(rotation experiment ran in {:.1}s)", start.elapsed().as_secs_f64());

    report("exp1-endpoint-law", &|| exp_endpoint_law(&so2));
    report("finite-n-convergence", &|| finite_n_convergence(&so2));
    report("translation-box-law", &translation_box);
    report("scalings-identity", &scalings_identity);
    report("hull-oracle-suite", &hull_oracle_suite);
    report("recession-cone-checks", &recession_checks);
    report("geometry-identities", &geometry_identities);
    report("cones-intensity-exponent", &cones_exponent);

    let finite = so2.statistics["finite_ks_exp_mean2"];
    let zp: Vec<f64> = so2.series["limit"].columns[1].1.clone();
    println!(
        "note: rotation endpoints vs mean-2 exponential: limit KS {:.4} (p = {:.3}), finite KS {:.4}",
        so2.statistics["limit_ks_zeta_plus_exp_mean2"],
        ks_one_sample(&zp, exp_cdf(2.0)).unwrap().p_value,
        finite
    );
    if !all {
        std::process::exit(1);
    }
}
