use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geometry::{support_function, Direction};
use crate::linalg::dist;
use crate::poisson::random_unit;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_in(body: &ConvexBody, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let d = body.dim();
    let mut out = Vec::new();
    while out.len() < n {
        let p: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
        if body.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn pentagon() -> ConvexBody {
    let v: Vec<Vec<f64>> = (0..5)
        .map(|k| {
            let a = 0.3 + std::f64::consts::TAU * k as f64 / 5.0;
            vec![1.2 * a.cos(), a.sin()]
        })
        .collect();
    ConvexBody::Polytope(Polytope::from_vertices(&v).unwrap())
}

/// Jarvis march; returns hull vertices counter-clockwise.
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
            let farther = dist(&cur, p) > dist(&cur, &next);
            if cross < 0.0 || (cross == 0.0 && farther) {
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

#[test]
fn k_hull_square_segment() {
    let h = k_hull_translations(&ConvexBody::square(), &[vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
    let p = h.as_polytope().unwrap();
    assert!(p.same_vertices(&Polytope::from_vertices(&[vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap(), 1e-9));
}

#[test]
fn k_hull_square_matches_translation_grid() {
    // brute force: feasible translations on a 1e-3 grid, then intersect the translates
    let mut r = rng(1);
    let k = ConvexBody::square();
    for _ in 0..5 {
        let a = uniform_in(&k, 3, &mut r);
        let h = k_hull_translations(&k, &a).unwrap();
        let step = 1e-3;
        let (mut lo, mut hi) = ([f64::NEG_INFINITY; 2], [f64::INFINITY; 2]);
        for i in -2000..=2000 {
            for j in -2000..=2000 {
                let x = [i as f64 * step, j as f64 * step];
                if a.iter().all(|p| (p[0] - x[0]).abs() <= 1.0 && (p[1] - x[1]).abs() <= 1.0) {
                    for c in 0..2 {
                        lo[c] = lo[c].max(x[c] - 1.0);
                        hi[c] = hi[c].min(x[c] + 1.0);
                    }
                }
            }
        }
        for c in 0..2 {
            let e = linalg::unit(2, c);
            let me = linalg::scale(&e, -1.0);
            assert!((h.support(&e).unwrap() - hi[c]).abs() < 2e-3);
            assert!((h.support(&me).unwrap() + lo[c]).abs() < 2e-3);
        }
    }
}

#[test]
fn k_hull_singleton() {
    let a = vec![vec![0.3, -0.2]];
    let h = k_hull_translations(&pentagon(), &a).unwrap();
    let p = h.as_polytope().unwrap();
    assert_eq!(p.vertices().len(), 1);
    assert!(dist(&p.vertices()[0], &a[0]) < 1e-9);
    let b = k_hull_translations(&ConvexBody::ball(2, 1.0), &a).unwrap();
    assert!(b.contains(&a[0]));
    assert!(!b.contains(&[0.3, -0.2 + 1e-6]));
}

#[test]
fn k_hull_whole_space_when_infeasible() {
    let h = k_hull_translations(&ConvexBody::square(), &[vec![-1.5, 0.0], vec![1.5, 0.0]]).unwrap();
    assert!(h.is_whole_space());
    let b = k_hull_translations(&ConvexBody::ball(2, 1.0), &[vec![-1.5, 0.0], vec![1.5, 0.0]]).unwrap();
    assert!(b.is_whole_space());
}

#[test]
fn ball_lens() {
    let a = vec![vec![-0.5, 0.0], vec![0.5, 0.0]];
    let h = k_hull_translations(&ConvexBody::ball(2, 1.0), &a).unwrap();
    let c = 0.75f64.sqrt();
    let lens = |y: &[f64]| dist(y, &[0.0, c]) <= 1.0 && dist(y, &[0.0, -c]) <= 1.0;
    let lens_margin = |y: &[f64]| (dist(y, &[0.0, c]) - 1.0).abs().min((dist(y, &[0.0, -c]) - 1.0).abs());
    let mut r = rng(2);
    let mut n = 0;
    while n < 500 {
        let y = [r.random_range(-0.7..0.7), r.random_range(-0.3..0.3)];
        if lens_margin(&y) < 1e-6 {
            continue;
        }
        assert_eq!(h.contains(&y), lens(&y), "{y:?}");
        n += 1;
    }

    // brute force over a discretised centre set and a direction grid
    let step = 0.01;
    let mut centres = Vec::new();
    for i in -100..=100 {
        for j in -100..=100 {
            let x = vec![i as f64 * step, j as f64 * step];
            if a.iter().all(|p| dist(p, &x) <= 1.0) {
                centres.push(x);
            }
        }
    }
    for _ in 0..200 {
        let y = vec![r.random_range(-0.7..0.7), r.random_range(-0.3..0.3)];
        let far = centres.iter().map(|x| dist(x, &y)).fold(0.0, f64::max);
        if (far - 1.0).abs() > 0.02 {
            assert_eq!(h.contains(&y), far <= 1.0);
        }
    }
}

#[test]
fn translations_scalings_examples() {
    let sq = ConvexBody::square();
    let h = hull_translations_scalings(&sq, &[vec![0.0, 0.0], vec![0.5, 0.5]]).unwrap();
    let bx = Polytope::from_vertices(&[vec![0.0, 0.0], vec![0.5, 0.0], vec![0.0, 0.5], vec![0.5, 0.5]]).unwrap();
    assert!(h.as_polytope().unwrap().same_vertices(&bx, 1e-9));

    let single = hull_translations_scalings(&sq, &[vec![0.0, 0.0]]).unwrap();
    assert_eq!(single.as_polytope().unwrap().vertices(), &[vec![0.0, 0.0]]);

    // ball: the hull is conv(A)
    let a = vec![vec![0.1, 0.2], vec![-0.5, 0.1], vec![0.3, -0.6]];
    let fam = HullFamily::from_name("translations-scalings").unwrap();
    let b = compute_hull(&ConvexBody::ball(2, 1.0), &fam, &a).unwrap();
    assert!(b.as_polytope().unwrap().same_vertices(&Polytope::from_vertices(&a).unwrap(), 1e-9));
}

#[test]
fn translations_scalings_brute_force() {
    // corner cones and edge half-planes of the square, translates on a grid
    let sq = ConvexBody::square();
    let ConvexBody::Polytope(p) = &sq else { unreachable!() };
    let mut r = rng(3);
    for _ in 0..5 {
        let a = uniform_in(&sq, 3, &mut r);
        let h = hull_translations_scalings(&sq, &a).unwrap();
        let mut offsets = vec![f64::INFINITY; 4];
        let faces: Vec<Vec<usize>> = p.vertices().iter().map(|v| p.active_facets(v)).chain((0..4).map(|i| vec![i])).collect();
        let step = 0.005;
        for face in &faces {
            for i in -400..=400 {
                for j in -400..=400 {
                    let x = [i as f64 * step, j as f64 * step];
                    let ok = a.iter().all(|q| face.iter().all(|&f| dot(&p.facets()[f].normal, &linalg::sub(q, &x)) <= 0.0));
                    if ok {
                        for &f in face {
                            offsets[f] = offsets[f].min(dot(&p.facets()[f].normal, &x));
                        }
                    }
                }
            }
        }
        for (f, o) in p.facets().iter().zip(&offsets) {
            assert!((h.support(&f.normal).unwrap() - o).abs() < 1e-2);
        }
    }
}

#[test]
fn full_affine_examples() {
    let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
    let h = hull_full_affine(&tri).unwrap();
    assert!(h.as_polytope().unwrap().same_vertices(&Polytope::from_vertices(&tri).unwrap(), 0.0));
    assert_eq!(h.as_polytope().unwrap().vertices().len(), 3);

    let col = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.5, 0.5], vec![2.0, 2.0]];
    let s = hull_full_affine(&col).unwrap();
    let p = s.as_polytope().unwrap();
    assert_eq!(p.vertices().len(), 2);
    assert_eq!(p.affine_dim(), 1);
}

#[test]
fn full_affine_matches_gift_wrapping() {
    let mut r = rng(4);
    for _ in 0..50 {
        let a: Vec<Vec<f64>> = (0..20).map(|_| vec![r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)]).collect();
        let h = hull_full_affine(&a).unwrap();
        let oracle = gift_wrap(&a);
        let p = h.as_polytope().unwrap();
        assert_eq!(p.vertices().len(), oracle.len());
        for v in &oracle {
            assert!(p.vertices().iter().any(|w| dist(v, w) == 0.0));
        }
    }
}

#[test]
fn linear_ball_examples() {
    let h = hull_linear_ball(&[vec![1.0, 0.0]]).unwrap();
    assert!(h.as_polytope().unwrap().same_vertices(&Polytope::from_vertices(&[vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap(), 0.0));
    let h = hull_linear_ball(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
    let diamond = Polytope::from_vertices(&[vec![0.5, 0.0], vec![-0.5, 0.0], vec![0.0, 0.5], vec![0.0, -0.5]]).unwrap();
    assert!(h.as_polytope().unwrap().same_vertices(&diamond, 0.0));
    let z = hull_linear_ball(&[vec![0.0, 0.0]]).unwrap();
    assert_eq!(z.as_polytope().unwrap().vertices(), &[vec![0.0, 0.0]]);
}

#[test]
fn positive_hull_examples() {
    let q = positive_hull(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    assert!(q.contains(&[2.0, 3.0]));
    assert!(!q.contains(&[-0.1, 3.0]));
    let HullShape::Cone(c) = &q.shape else { panic!() };
    assert_eq!(c.rays().len(), 2);
    let z = positive_hull(&[vec![0.0, 0.0]]).unwrap();
    let HullShape::Cone(c) = &z.shape else { panic!() };
    assert!(c.is_zero());
    let w = positive_hull(&[vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap();
    let HullShape::Cone(c) = &w.shape else { panic!() };
    assert!(c.is_whole_space());
}

#[test]
fn positive_hull_angular_brute_force() {
    // in the plane, pos(A) for A in an open half-plane is the sector between
    // the extreme angles
    let mut r = rng(5);
    for _ in 0..50 {
        let base: f64 = r.random_range(-3.0..3.0);
        let angles: Vec<f64> = (0..5).map(|_| base + r.random_range(-1.4..1.4)).collect();
        let a: Vec<Vec<f64>> = angles.iter().map(|t| vec![t.cos() * 0.7, t.sin() * 0.7]).collect();
        let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let h = positive_hull(&a).unwrap();
        for _ in 0..100 {
            let t = base + r.random_range(-3.0..3.0);
            let y = [2.0 * t.cos(), 2.0 * t.sin()];
            if (t - lo).abs() < 1e-6 || (t - hi).abs() < 1e-6 {
                continue;
            }
            assert_eq!(h.contains(&y), t >= lo && t <= hi);
        }
    }
}

#[test]
fn spherical_hull_examples() {
    let s = spherical_hull_halfball(&[vec![1.0, 0.0]]).unwrap();
    assert!(s.contains(&[0.0, 0.0]) && s.contains(&[0.5, 0.0]) && s.contains(&[1.0, 0.0]));
    assert!(!s.contains(&[1.01, 0.0]) && !s.contains(&[0.5, 0.01]));

    let q = spherical_hull_halfball(&[vec![0.9, 0.0], vec![0.0, 0.9]]).unwrap();
    assert!(q.contains(&[0.6, 0.6]));
    assert!(!q.contains(&[0.8, 0.8]));
    assert!(!q.contains(&[-0.1, 0.5]));

    let arc = spherical_hull_halfball(&[vec![1.0, 0.0], vec![0.5f64.sqrt(), 0.5f64.sqrt()]]).unwrap();
    let mut angles: Vec<f64> = arc.spherical_part().unwrap().iter().map(|u| u[1].atan2(u[0])).collect();
    angles.sort_by(f64::total_cmp);
    assert_eq!(angles.len(), 2);
    assert!(angles[0].abs() < 1e-12 && (angles[1] - std::f64::consts::FRAC_PI_4).abs() < 1e-12);

    assert!(spherical_hull_halfball(&[vec![-0.5, 0.0]]).is_err());
}

#[test]
fn generic_oracle_examples() {
    let ball = ConvexBody::ball(2, 1.0);
    let a = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
    let gl = HullFamily::from_name("linear-ball").unwrap();
    let budget = OracleBudget { starts: 16, max_evals: 4000, seed: 7 };
    let z = [0.45, 0.45];
    match generic_hull_membership(&ball, &gl, &a, &z, &budget).unwrap() {
        OracleAnswer::Outside(t) => {
            assert!(a.iter().all(|p| t.contains(&ball, p)));
            assert!(!t.contains(&ball, &z));
            assert_eq!(t.x, vec![0.0, 0.0]);
        }
        other => panic!("expected a witness, got {other:?}"),
    }
    assert_eq!(generic_hull_membership(&ball, &gl, &a, &a[1], &budget).unwrap(), OracleAnswer::Inside);

    let sr = HullFamily::new(Translations::Full, LinearPart::ScalingsRotations);
    let tri = vec![vec![0.3, 0.0], vec![-0.2, 0.3], vec![-0.1, -0.4]];
    let centroid = [0.0, -1.0 / 30.0];
    assert_eq!(generic_hull_membership(&ball, &sr, &tri, &centroid, &budget).unwrap(), OracleAnswer::Inside);

    // deterministic given the seed
    let again = generic_hull_membership(&ball, &gl, &a, &z, &budget).unwrap();
    assert_eq!(again, generic_hull_membership(&ball, &gl, &a, &z, &budget).unwrap());
}

#[test]
fn oracle_agrees_with_closed_forms() {
    let mut r = rng(6);
    let budget = OracleBudget { starts: 12, max_evals: 3000, seed: 1 };
    let configs: Vec<(ConvexBody, HullFamily)> = vec![
        (ConvexBody::square(), HullFamily::from_name("k-hull").unwrap()),
        (pentagon(), HullFamily::from_name("translations-scalings").unwrap()),
        (ConvexBody::ball(2, 1.0), HullFamily::from_name("linear-ball").unwrap()),
        (ConvexBody::ball(2, 1.0), HullFamily::from_name("k-hull").unwrap()),
    ];
    for (body, fam) in &configs {
        let a = uniform_in(body, 3, &mut r);
        let a: Vec<Vec<f64>> = a.iter().map(|p| linalg::scale(p, 0.7)).collect();
        let h = compute_hull(body, fam, &a).unwrap();
        let mut checked = 0;
        while checked < 40 {
            let y: Vec<f64> = (0..2).map(|_| r.random_range(-1.2..1.2)).collect();
            // keep points at least 1e-3 from the closed-form boundary
            let near = random_unit(2, &mut r);
            let shifted = linalg::add(&y, &linalg::scale(&near, 1e-3));
            let back = linalg::sub(&y, &linalg::scale(&near, 1e-3));
            let inside = h.contains(&y);
            if inside != h.contains(&shifted) || inside != h.contains(&back) {
                continue;
            }
            let ans = generic_hull_membership(body, fam, &a, &y, &budget).unwrap();
            if inside {
                assert!(!matches!(ans, OracleAnswer::Outside(_)), "{fam:?} {y:?}");
            } else {
                assert!(matches!(ans, OracleAnswer::Outside(_)), "{fam:?} {y:?} {ans:?}");
            }
            checked += 1;
        }
    }
}

#[test]
fn feasible_set_examples() {
    let sq = ConvexBody::square();
    let kh = HullFamily::from_name("k-hull").unwrap();
    let b = OracleBudget::default();
    let FeasibleSet::Polytope(x) = feasible_set(&sq, &kh, &[vec![-1.0, 0.0], vec![1.0, 0.0]], &b).unwrap() else {
        panic!()
    };
    assert!(x.same_vertices(&Polytope::from_vertices(&[vec![0.0, -1.0], vec![0.0, 1.0]]).unwrap(), 1e-9));

    let ConvexBody::Polytope(p) = &sq else { unreachable!() };
    let fs = feasible_set(&sq, &kh, p.vertices(), &b).unwrap();
    assert_eq!(fs.contains_translation(&[0.0, 0.0]), Some(true));
    assert_eq!(feasible_set(&sq, &kh, &[vec![-1.2, 0.0], vec![1.2, 0.0]], &b).unwrap(), FeasibleSet::Empty);

    let ball = ConvexBody::ball(2, 1.0);
    let fs = feasible_set(&ball, &kh, &[vec![0.5, 0.0]], &b).unwrap();
    assert_eq!(fs.contains_translation(&[0.5, 0.9]), Some(true));
    assert_eq!(fs.contains_translation(&[0.5, 1.1]), Some(false));

    let sc = HullFamily::from_name("translations-scalings").unwrap();
    let small = OracleBudget { starts: 8, ..b };
    let FeasibleSet::Samples(ts) = feasible_set(&sq, &sc, &[vec![2.0, 0.0], vec![-2.0, 0.0]], &small).unwrap() else {
        panic!()
    };
    for t in ts {
        assert!(t.contains(&sq, &[2.0, 0.0]) && t.contains(&sq, &[-2.0, 0.0]));
    }
}

#[test]
fn feasible_set_invariant_under_hull() {
    let mut r = rng(7);
    let kh = HullFamily::from_name("k-hull").unwrap();
    let b = OracleBudget::default();
    for body in [ConvexBody::square(), pentagon()] {
        let a = uniform_in(&body, 3, &mut r);
        let h = k_hull_translations(&body, &a).unwrap();
        let hp = h.as_polytope().unwrap();
        let mut dense = hp.vertices().to_vec();
        for i in 0..hp.facets().len() {
            for _ in 0..20 {
                dense.push(hp.sample_facet(i, &mut r));
            }
        }
        let (FeasibleSet::Polytope(x1), FeasibleSet::Polytope(x2)) =
            (feasible_set(&body, &kh, &a, &b).unwrap(), feasible_set(&body, &kh, &dense, &b).unwrap())
        else {
            panic!()
        };
        assert!(x1.same_vertices(&x2, EPS_GEO * 10.0));
    }
}

#[test]
fn sandwich() {
    let mut r = rng(8);
    let bodies = [ConvexBody::square(), pentagon(), ConvexBody::Polytope(Polytope::hypercube(3, 1.0))];
    for body in &bodies {
        for _ in 0..10 {
            let a = uniform_in(body, 4, &mut r);
            let conv = Polytope::from_vertices(&a).unwrap();
            for h in [k_hull_translations(body, &a).unwrap(), hull_translations_scalings(body, &a).unwrap()] {
                let p = h.as_polytope().unwrap();
                for v in conv.vertices() {
                    assert!(p.contains(v));
                }
                for v in p.vertices() {
                    assert!(body.contains(v));
                }
            }
        }
    }
    for d in [2usize, 3] {
        let ball = ConvexBody::ball(d, 1.0);
        for _ in 0..5 {
            let a = uniform_in(&ball, 3, &mut r);
            let h = k_hull_translations(&ball, &a).unwrap();
            for p in &a {
                assert!(h.contains(p));
            }
            // boundary of K is never inside unless it is a sample point
            for _ in 0..20 {
                let u = random_unit(d, &mut r);
                let y = linalg::scale(&u, 1.0 + 1e-6);
                assert!(!h.contains(&y));
            }
        }
    }
}

#[test]
fn k_hull_idempotent() {
    let mut r = rng(9);
    for body in [ConvexBody::square(), pentagon(), ConvexBody::Polytope(Polytope::hypercube(3, 1.0))] {
        let ConvexBody::Polytope(k) = &body else { unreachable!() };
        for _ in 0..5 {
            let a = uniform_in(&body, 3, &mut r);
            let h = k_hull_translations(&body, &a).unwrap();
            let hp = h.as_polytope().unwrap();
            let mut dense = hp.vertices().to_vec();
            if hp.is_full_dimensional() {
                for i in 0..hp.facets().len() {
                    for _ in 0..50 {
                        dense.push(hp.sample_facet(i, &mut r));
                    }
                }
            }
            let h2 = k_hull_translations(&body, &dense).unwrap();
            for f in k.facets() {
                assert!((h.support(&f.normal).unwrap() - h2.support(&f.normal).unwrap()).abs() <= 1e-6);
            }
        }
    }
}

#[test]
fn monotone_in_family() {
    let mut r = rng(10);
    let chain = ["identity", "k-hull", "translations-scalings", "full-affine"];
    for k in 0..50 {
        let body = if k % 2 == 0 { ConvexBody::square() } else { pentagon() };
        let a = uniform_in(&body, 1 + k % 4, &mut r);
        let hulls: Vec<HullResult> = chain
            .iter()
            .map(|n| compute_hull(&body, &HullFamily::from_name(n).unwrap(), &a).unwrap())
            .collect();
        for _ in 0..20 {
            let u = random_unit(2, &mut r);
            let hs: Vec<f64> = hulls.iter().map(|h| h.support(&u).unwrap()).collect();
            for w in hs.windows(2) {
                assert!(w[1] <= w[0] + 1e-9, "{hs:?}");
            }
        }
        assert_eq!(hulls[0].support(&[1.0, 0.0]), Some(support_function(&body, &Direction::new(&[1.0, 0.0]).unwrap())));
    }
}

#[test]
fn json_output() {
    let h = k_hull_translations(&ConvexBody::square(), &[vec![0.0, 0.0], vec![0.5, 0.1]]).unwrap();
    let v = h.to_json();
    assert_eq!(v["kind"], "polytope");
    assert_eq!(v["exactness"], "exact");
    let w = k_hull_translations(&ConvexBody::ball(2, 1.0), &[vec![0.0, 0.0]]).unwrap().to_json();
    assert_eq!(w["kind"], "ball_hull");
    assert_eq!(w["exactness"], "exact");
    assert!(HullFamily::from_name("nope").is_err());
}
