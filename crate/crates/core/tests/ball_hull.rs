mod support;

use ballpoly::ball_hull::{essential_points, in_ball_set, separating_ball, spindle_contains, spindle_reach, tighten};
use ballpoly::generators::{regular_tetrahedron, suspended_polygon};
use std::f64::consts::TAU;

use ballpoly::{Configuration, Error, Point3, Tolerance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::*;

fn cluster(seed: u64, n: usize, spread: f64) -> Configuration {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n).map(|_| random_in_ball(&mut rng) * spread).collect();
    Configuration::new(pts, tol()).unwrap()
}

/// Best margin over random points of S(p_i), a lower bound of the true one.
fn sampled_margin(v: &Configuration, i: usize, samples: usize, rng: &mut ChaCha8Rng) -> f64 {
    let c = v.point(i);
    (0..samples)
        .map(|_| {
            let x = c + random_unit(rng);
            let worst = (0..v.len()).filter(|&j| j != i).map(|j| x.dist(v.point(j))).fold(0.0, f64::max);
            1.0 - worst
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn margins_dominate_sampling_and_match_witnesses() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..30 {
        let v = cluster(seed, 3 + (seed as usize % 8), 0.45);
        let rep = essential_points(&v).unwrap();
        for i in 0..v.len() {
            let label = v.label(i);
            let margin = rep.margins[&label];
            let sampled = sampled_margin(&v, i, 20_000, &mut rng);
            assert!(margin >= sampled - 1e-12, "seed {seed} point {i}: {margin} < sampled {sampled}");
            assert!(margin <= sampled + 0.01, "seed {seed} point {i}: {margin} far above sampled {sampled}");
            if sampled > 1e-6 {
                assert!(rep.essential.contains(&label));
            }
            if let Some(x) = rep.witnesses.get(&label) {
                assert!((x.dist(v.point(i)) - 1.0).abs() < 1e-12);
                if rep.certified.contains(&label) {
                    continue;
                }
                let worst = (0..v.len()).filter(|&j| j != i).map(|j| x.dist(v.point(j))).fold(0.0, f64::max);
                assert!((1.0 - worst - margin).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn tetrahedron_center_is_inessential() {
    let mut pts = regular_tetrahedron().to_vec();
    pts.push(Point3::ORIGIN);
    let v = Configuration::new(pts, tol()).unwrap();
    let rep = essential_points(&v).unwrap();
    assert_eq!(rep.essential, vec![0, 1, 2, 3]);
    assert_eq!(rep.inessential, vec![4]);
    assert!(!rep.is_tight());
    let t = tighten(&v).unwrap();
    assert_eq!(t.labels(), &[0, 1, 2, 3]);
}

#[test]
fn extremal_families_are_tight_by_certificate() {
    for k in 2..=5 {
        let v = suspended_polygon(k, tol()).unwrap();
        let rep = essential_points(&v).unwrap();
        assert!(rep.is_tight());
        assert_eq!(rep.certified.len(), v.len());
    }
}

#[test]
fn wide_configuration_is_rejected() {
    let v = Configuration::new(vec![Point3::ORIGIN, Point3::X * 2.5], tol()).unwrap();
    assert!(matches!(essential_points(&v), Err(Error::NotFullDimensional(_))));
}

#[test]
fn tighten_keeps_the_ball_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..20 {
        let v = cluster(100 + seed, 12, 0.45);
        let t = tighten(&v).unwrap();
        assert!(essential_points(&t).unwrap().is_tight());
        for _ in 0..2000 {
            let x = random_in_ball(&mut rng) * 1.5;
            let slack = v.points().iter().map(|p| (p.dist(x) - 1.0).abs()).fold(f64::INFINITY, f64::min);
            if slack > 1e-6 {
                assert_eq!(in_ball_set(&v, x), in_ball_set(&t, x));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spindle_reach_bounds_sampled_lens(
        a in (-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64),
        b in (-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64),
        x in (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64),
    ) {
        let t = Tolerance::default();
        let (a, b, x) = (Point3::new(a.0, a.1, a.2), Point3::new(b.0, b.1, b.2), Point3::new(x.0, x.1, x.2));
        prop_assume!(a.dist(b) > 1e-3);
        // boundary of the lens of centers covering a and b: the closed cap
        // of S(p) inside B(q) for both orderings, on a polar grid
        let theta_cap = (a.dist(b) / 2.0).acos();
        let mut best: f64 = 0.0;
        for (p, q) in [(a, b), (b, a)] {
            let n = (q - p).normalized().unwrap();
            let e1 = n.cross(if n.x.abs() < 0.9 { Point3::X } else { Point3::Y }).normalized().unwrap();
            let e2 = n.cross(e1);
            for i in 0..=200 {
                let th = theta_cap * i as f64 / 200.0;
                for k in 0..720 {
                    let phi = k as f64 * TAU / 720.0;
                    let c = p + n * th.cos() + (e1 * phi.cos() + e2 * phi.sin()) * th.sin();
                    best = best.max(c.dist(x));
                }
            }
        }
        let reach = spindle_reach(a, b, x, &t);
        prop_assert!(reach >= best - 1e-12, "reach {} below sampled {}", reach, best);
        prop_assert!(reach <= best + 1e-3, "reach {} far above sampled {}", reach, best);
        if (reach - 1.0).abs() > 1e-6 {
            prop_assert_eq!(spindle_contains(a, b, x, &t), reach < 1.0);
        }
    }

    #[test]
    fn spindle_contains_its_short_arcs(
        a in (-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64),
        b in (-0.5..0.5f64, -0.5..0.5f64, -0.5..0.5f64),
        s in 0.0..1.0f64,
    ) {
        let t = Tolerance::default();
        let (a, b) = (Point3::new(a.0, a.1, a.2), Point3::new(b.0, b.1, b.2));
        prop_assume!(a.dist(b) > 1e-3);
        // the segment lies in every ball containing both ends
        prop_assert!(spindle_contains(a, b, a + (b - a) * s, &t));
        prop_assert!(spindle_contains(a, b, a, &t));
    }

    #[test]
    fn separating_ball_separates(seed in any::<u64>(), n in 1usize..6) {
        let t = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s: Vec<Point3> = (0..n).map(|_| random_in_ball(&mut rng) * 0.3).collect();
        let z = random_in_ball(&mut rng) * 0.8;
        match separating_ball(&s, z, &t) {
            Ok(ball) => {
                prop_assert!((ball.radius - 1.0).abs() < 1e-15);
                for p in &s {
                    prop_assert!(ball.center.dist(*p) <= 1.0 + t.eq_dist);
                }
                prop_assert!(ball.center.dist(z) > 1.0);
            }
            Err(e) => {
                prop_assert!(matches!(e, Error::NotSeparable), "{:?}", e);
                // no sampled unit ball containing s misses z
                for _ in 0..20_000 {
                    let c = s[0] + random_in_ball(&mut rng);
                    if s.iter().all(|p| p.dist(c) <= 1.0) {
                        prop_assert!(c.dist(z) <= 1.0 + 1e-9, "center {:?} separates", c);
                    }
                }
            }
        }
    }
}

#[test]
fn hull_points_are_not_separable() {
    let t = tol();
    let s = [Point3::ORIGIN, Point3::X * 0.4, Point3::Y * 0.4, Point3::Z * 0.4];
    assert_eq!(separating_ball(&s, Point3::new(0.1, 0.1, 0.1), &t).unwrap_err(), Error::NotSeparable);
    assert_eq!(separating_ball(&s, Point3::X * 0.2, &t).unwrap_err(), Error::NotSeparable);
    assert!(separating_ball(&s, Point3::X * -0.3, &t).is_ok());
    assert_eq!(separating_ball(&[], Point3::ORIGIN, &t).unwrap_err(), Error::EmptyInput);
}
