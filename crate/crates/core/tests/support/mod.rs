//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ballpoly::duality::canonical_duality;
use ballpoly::faces::build_face_complex;
use ballpoly::generators::{
    add_dangling_vertices, ball_truncate, rugby_ball, suspended_polygon, tetrahedron_with_arc_points, two_pole_family,
    HeightTag, RugbyHeight, TwoPoleFamily,
};
use ballpoly::{Configuration, Point3, Tolerance};
use rand::Rng;

pub fn tol() -> Tolerance {
    Tolerance::default()
}

pub fn arcs(spec: &[([usize; 2], usize)]) -> BTreeMap<[usize; 2], usize> {
    spec.iter().copied().collect()
}

/// Tetrahedron arc selections used across the tests: every pattern of
/// pairwise adjacent arcs (star, triangle, single, pair) with a few counts.
pub fn tetrahedron_variants() -> Vec<(String, Configuration)> {
    let selections: Vec<Vec<([usize; 2], usize)>> = vec![
        vec![],
        vec![([0, 1], 1)],
        vec![([0, 1], 3)],
        vec![([0, 1], 1), ([0, 2], 2)],
        vec![([0, 1], 2), ([0, 2], 1), ([0, 3], 1)],
        vec![([0, 1], 1), ([1, 2], 1), ([0, 2], 1)],
        vec![([1, 2], 2), ([2, 3], 2), ([1, 3], 1)],
    ];
    selections
        .into_iter()
        .map(|s| {
            let v = tetrahedron_with_arc_points(&arcs(&s), tol()).expect("tetrahedron family");
            (format!("tetrahedron {s:?}"), v)
        })
        .collect()
}

pub fn suspended_family(ks: std::ops::RangeInclusive<usize>) -> Vec<(String, Configuration)> {
    ks.map(|k| (format!("suspended k={k}"), suspended_polygon(k, tol()).expect("suspended family"))).collect()
}

/// Apex truncations of suspended polygons.
pub fn truncations(ks: std::ops::RangeInclusive<usize>, epsilons: &[f64]) -> Vec<(String, Configuration)> {
    let mut out = Vec::new();
    for k in ks {
        let base = suspended_polygon(k, tol()).expect("suspended family");
        let apex = 2 * k - 1;
        for &eps in epsilons {
            let w = ball_truncate(&base, apex, eps, None).expect("apex truncation");
            out.push((format!("truncated k={k} eps={eps}"), w));
        }
    }
    out
}

/// Greedy set of edges containing no dual pair, one placement each.
pub fn dangling_products(bases: &[(String, Configuration)], max_edges: usize) -> Vec<(String, Configuration)> {
    let mut out = Vec::new();
    for (name, base) in bases {
        let fc = build_face_complex(base).expect("base complex");
        let phi = canonical_duality(&fc).expect("base duality");
        let mut chosen: Vec<usize> = Vec::new();
        for e in 0..fc.num_edges() {
            if chosen.len() == max_edges {
                break;
            }
            if !chosen.contains(&phi.edge_to_edge[e]) && phi.edge_to_edge[e] != e {
                chosen.push(e);
            }
        }
        for m in 1..=chosen.len() {
            let placements: Vec<(usize, f64)> =
                chosen[..m].iter().enumerate().map(|(i, &e)| (e, 0.3 + 0.1 * (i % 4) as f64)).collect();
            let r = add_dangling_vertices(base, &placements).expect("dangling product");
            out.push((format!("{name} + dangling {placements:?}"), r.config));
        }
    }
    out
}

/// Every extremal configuration the generators produce in the battery.
pub fn extremal_battery() -> Vec<(String, Configuration)> {
    let mut out = suspended_family(2..=8);
    out.extend(tetrahedron_variants());
    out.extend(truncations(2..=6, &[0.01, 0.05, 0.1]));
    let bases: Vec<(String, Configuration)> =
        suspended_family(2..=4).into_iter().chain(truncations(3..=3, &[0.05])).collect();
    out.extend(dangling_products(&bases, 3));
    out
}

fn rugby_heights() -> Vec<(String, RugbyHeight)> {
    let mut out: Vec<(String, RugbyHeight)> =
        [0.3, 0.5, 0.8].iter().map(|&h| (format!("h={h}"), RugbyHeight::Value(h))).collect();
    out.push(("reuleaux".into(), RugbyHeight::Tuned(HeightTag::Reuleaux)));
    out
}

/// Polygon-only rugby balls, including the tuned heights for odd n.
pub fn rugby_battery() -> Vec<(String, Configuration)> {
    rugby_configs(false)
}

/// Rugby polygons with both poles added. The poles are inessential, so
/// these are inputs for the extremality test only.
pub fn rugby_with_poles() -> Vec<(String, Configuration)> {
    rugby_configs(true)
}

fn rugby_configs(poles: bool) -> Vec<(String, Configuration)> {
    let mut out = Vec::new();
    for n in 3..=7 {
        for (tag, h) in rugby_heights() {
            if matches!(h, RugbyHeight::Tuned(_)) && n % 2 == 0 {
                continue;
            }
            let v = rugby_ball(n, h, poles, tol()).expect("rugby family");
            out.push((format!("rugby n={n} {tag} poles={poles}"), v));
        }
    }
    out
}

/// Random two-pole parameters: marked gaps of at least 0.2 rad, no gap
/// within 0.05 rad of a half circle, at least one occupied gap.
pub fn random_two_pole<R: Rng>(rng: &mut R) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    loop {
        let m = rng.gen_range(2..=7);
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps: Vec<f64> = (0..m)
            .map(|i| {
                let next = if i + 1 < m { angles[i + 1] } else { angles[0] + 2.0 * PI };
                next - angles[i]
            })
            .collect();
        if gaps.iter().any(|&g| g < 0.2 || (g - PI).abs() < 0.05) {
            continue;
        }
        let h = rng.gen_range(0.2..0.9);
        let placements: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let count = rng.gen_range(0..=2);
                let mut ts: Vec<f64> = (0..count).map(|_| rng.gen_range(0.1..0.9)).collect();
                ts.sort_by(f64::total_cmp);
                ts.dedup_by(|a, b| (*a - *b).abs() < 0.05);
                ts
            })
            .collect();
        if placements.iter().all(Vec::is_empty) {
            continue;
        }
        return (h, angles, placements);
    }
}

pub fn two_pole_sweep<R: Rng>(rng: &mut R, cases: usize) -> Vec<(String, TwoPoleFamily)> {
    (0..cases)
        .map(|i| {
            let (h, angles, placements) = random_two_pole(rng);
            let fam = two_pole_family(h, &angles, &placements, tol()).expect("two-pole family");
            (format!("two-pole #{i} h={h:.3} angles={angles:.3?} placements={placements:.3?}"), fam)
        })
        .collect()
}

/// Uniform point in the unit ball.
pub fn random_in_ball<R: Rng>(rng: &mut R) -> Point3 {
    loop {
        let p = Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.norm2() <= 1.0 {
            return p;
        }
    }
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Point3 {
    loop {
        let p = random_in_ball(rng);
        if let Some(u) = p.normalized().filter(|_| p.norm2() > 1e-4) {
            return u;
        }
    }
}

/// Uniform unit vector u with u . n >= cos_cap; `n` must be a unit vector.
pub fn random_in_cap<R: Rng>(rng: &mut R, n: Point3, cos_cap: f64) -> Point3 {
    let a = if n.x.abs() < 0.9 { Point3::X } else { Point3::Y };
    let e1 = n.cross(a).normalized().unwrap();
    let e2 = n.cross(e1);
    let c = rng.gen_range(cos_cap..=1.0);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let s = (1.0 - c * c).max(0.0).sqrt();
    n * c + e1 * (s * phi.cos()) + e2 * (s * phi.sin())
}

/// Rotation about a random axis by a random angle, then a translation.
pub fn random_motion<R: Rng>(rng: &mut R) -> impl Fn(Point3) -> Point3 {
    let axis = random_unit(rng);
    let angle = rng.gen_range(0.0..2.0 * PI);
    let shift = random_in_ball(rng) * 3.0;
    move |p: Point3| {
        let (s, c) = angle.sin_cos();
        p * c + axis.cross(p) * s + axis * (axis.dot(p) * (1.0 - c)) + shift
    }
}

/// Diameter and edge count by direct pair enumeration.
pub fn brute_diameter_edges(points: &[Point3], eq_dist: f64) -> (f64, usize) {
    let mut diam: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            diam = diam.max(points[i].dist(points[j]));
        }
    }
    let mut e = 0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i].dist(points[j]) - diam).abs() <= eq_dist {
                e += 1;
            }
        }
    }
    (diam, e)
}
