mod support;

use std::f64::consts::TAU;

use ballpoly::complex::AbstractComplex;
use ballpoly::duality::{
    apexed_prism_complex, barycentric_subdivision, canonical_duality, dual_arc_distance_classify,
    enumerate_self_dualities, fixed_point_report, flag_complex, DistanceClass, DualArcPair, Face, SelfDuality,
};
use ballpoly::faces::build_face_complex;
use ballpoly::generators::{regular_tetrahedron, rugby_ball, suspended_polygon, RugbyHeight};
use ballpoly::{Error, Point3};
use proptest::prelude::*;
use support::*;

fn tetra_pair() -> DualArcPair {
    let p = regular_tetrahedron();
    DualArcPair::new(p[0], p[1], p[2], p[3], &tol()).unwrap()
}

#[test]
fn dual_arc_examples() {
    let t = tol();
    let pair = tetra_pair();
    let short_mid_c = pair.circle_xy.at(pair.short_arc_ab.midpoint());
    let short_mid_z = pair.circle_ab.at(pair.short_arc_xy.midpoint());
    let long_mid_c = pair.circle_xy.at(pair.short_arc_ab.midpoint() + TAU / 2.0);
    for k in 0..16 {
        let z = pair.circle_ab.at(k as f64 * 0.4);
        assert_eq!(dual_arc_distance_classify(&pair, pair.a, z, &t).unwrap(), DistanceClass::Equal1);
    }
    assert_eq!(dual_arc_distance_classify(&pair, short_mid_c, short_mid_z, &t).unwrap(), DistanceClass::GreaterThan1);
    assert_eq!(dual_arc_distance_classify(&pair, long_mid_c, short_mid_z, &t).unwrap(), DistanceClass::LessThan1);
    assert!(short_mid_c.dist(short_mid_z) > 1.0);
}

#[test]
fn dual_arc_rejects_bad_quadruples() {
    let p = regular_tetrahedron();
    let t = tol();
    assert!(matches!(DualArcPair::new(p[0], p[1], p[2], p[2] * 0.9, &t), Err(Error::InvalidSpec(_))));
    let pair = tetra_pair();
    // a sample off its circle
    assert!(dual_arc_distance_classify(&pair, Point3::ORIGIN, pair.x, &t).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn classification_matches_distance_on_tetrahedron_arcs(tc in 0.0..TAU, tz in 0.0..TAU) {
        let t = tol();
        let pair = tetra_pair();
        let (c, z) = (pair.circle_xy.at(tc), pair.circle_ab.at(tz));
        let d = c.dist(z);
        let class = dual_arc_distance_classify(&pair, c, z, &t).unwrap();
        match class {
            DistanceClass::GreaterThan1 => prop_assert!(d > 1.0),
            DistanceClass::LessThan1 => prop_assert!(d < 1.0),
            DistanceClass::Equal1 => prop_assert!((d - 1.0).abs() < 1e-8),
        }
    }
}

#[test]
fn tetrahedron_edges_map_to_opposite_edges() {
    let v = suspended_polygon(2, tol()).unwrap();
    let fc = build_face_complex(&v).unwrap();
    let d = canonical_duality(&fc).unwrap();
    for e in &fc.edges {
        let img = &fc.edges[d.edge_to_edge[e.id]];
        let mut all: Vec<usize> = e.generator_pair.iter().chain(&img.generator_pair).copied().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }
}

#[test]
fn canonical_duality_sends_vertices_to_their_facets() {
    for k in 2..=6 {
        let v = suspended_polygon(k, tol()).unwrap();
        let fc = build_face_complex(&v).unwrap();
        let d = canonical_duality(&fc).unwrap();
        for x in &fc.vertices {
            let g = d.vertex_to_facet[x.id];
            assert!(x.position.dist(v.point(g)) < 1e-9);
        }
        // an edge between vertices x, y goes to the edge on C_xy
        for e in &fc.edges {
            let mut ends = e.endpoints.map(|x| d.vertex_to_facet[x]);
            ends.sort_unstable();
            assert_eq!(fc.edges[d.edge_to_edge[e.id]].generator_pair, ends);
        }
        let apex = 2 * k - 1;
        let apex_vertex = fc.vertices.iter().find(|x| x.position.dist(v.point(apex)) < 1e-9).unwrap();
        assert_eq!(d.vertex_to_facet[apex_vertex.id], apex);
    }
}

#[test]
fn canonical_duality_needs_extremal_input() {
    let v = rugby_ball(5, RugbyHeight::Value(0.5), false, tol()).unwrap();
    let fc = build_face_complex(&v).unwrap();
    assert!(matches!(canonical_duality(&fc), Err(Error::NotExtremalInput(_))));
}

#[test]
fn verify_rejects_a_broken_map() {
    let v = suspended_polygon(3, tol()).unwrap();
    let fc = build_face_complex(&v).unwrap();
    let c = fc.to_abstract();
    let d = canonical_duality(&fc).unwrap();
    let mut bad = d.clone();
    bad.vertex_to_facet.swap(0, 1);
    assert!(matches!(bad.verify(&c), Err(Error::DualityFailure(_))));
    let mut bad = d;
    bad.edge_to_edge.swap(0, 1);
    assert!(matches!(bad.verify(&c), Err(Error::DualityFailure(_))));
}

#[test]
fn flag_counts() {
    let pent = build_face_complex(&suspended_polygon(3, tol()).unwrap()).unwrap();
    let k = barycentric_subdivision(&pent).unwrap();
    assert_eq!((k.nodes.len(), k.triangles.len()), (22, 40));
    let rugby = build_face_complex(&rugby_ball(3, RugbyHeight::Value(0.5), false, tol()).unwrap()).unwrap();
    let k = barycentric_subdivision(&rugby).unwrap();
    assert_eq!((k.nodes.len(), k.triangles.len()), (8, 12));
}

#[test]
fn flags_are_chains_and_edge_nodes_are_midpoints() {
    let fc = build_face_complex(&suspended_polygon(4, tol()).unwrap()).unwrap();
    let k = barycentric_subdivision(&fc).unwrap();
    for &[x, e, f] in &k.triangles {
        let (Face::Vertex(x), Face::Edge(e), Face::Facet(f)) = (k.nodes[x].face, k.nodes[e].face, k.nodes[f].face)
        else {
            panic!("flag out of order");
        };
        assert!(fc.edges[e].endpoints.contains(&x));
        assert!(fc.facets[f].boundary_edges.contains(&e));
    }
    for e in &fc.edges {
        let z = k.nodes[k.edge_node(e.id)].position.unwrap();
        let [a, b] = e.endpoints.map(|x| fc.vertices[x].position);
        assert!((z.dist(a) - z.dist(b)).abs() < 1e-12);
    }
    // facet nodes lie strictly inside their facets
    for p in 0..fc.num_facets() {
        assert!(fc.strictly_inside_facet(p, k.nodes[k.facet_node(p)].position.unwrap()));
    }
}

#[test]
fn canonical_duality_is_strong_on_pentagon() {
    let fc = build_face_complex(&suspended_polygon(3, tol()).unwrap()).unwrap();
    let d = canonical_duality(&fc).unwrap();
    let rep = fixed_point_report(&d, &barycentric_subdivision(&fc).unwrap());
    assert!(rep.cell_fixed_point_free && rep.vertex_disjoint);
}

#[test]
fn apexed_prism_census() {
    assert_eq!(apexed_prism_complex(2).unwrap_err(), Error::InvalidOrder(2));
    for n in 3..=7 {
        let c = apexed_prism_complex(n).unwrap();
        assert_eq!((c.num_vertices(), c.num_edges(), c.num_facets()), (2 * n + 1, 4 * n, 2 * n + 1));
        assert_eq!(c.euler_characteristic(), 2);
        assert_eq!(c.vertex_valence(0), n);
        for i in 1..=n {
            assert_eq!(c.vertex_valence(i), 3, "a{i}");
            assert_eq!(c.vertex_valence(n + i), 4, "b{i}");
        }
    }
}

/// Every vertex-to-facet bijection that reverses incidence symmetrically,
/// found by trying all permutations.
fn brute_force_dualities(c: &AbstractComplex) -> usize {
    let n = c.num_vertices();
    let m = c.vertex_facet_incidence();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        let symmetric = (0..n).all(|v| (0..n).all(|w| m[v][perm[w]] == m[w][perm[v]]));
        let edges_map = c.edges.iter().all(|e| {
            let mut want = e.vertices.map(|x| perm[x]);
            want.sort_unstable();
            c.edges.iter().any(|g| {
                let mut f = g.facets;
                f.sort_unstable();
                f == want
            })
        });
        if symmetric && edges_map {
            count += 1;
        }
        // next permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    count
}

#[test]
fn enumeration_matches_permutation_search() {
    for n in 3..=4 {
        let c = apexed_prism_complex(n).unwrap();
        assert_eq!(enumerate_self_dualities(&c).unwrap().len(), brute_force_dualities(&c), "n={n}");
    }
}

#[test]
fn enumeration_examples() {
    let count = |n: usize| {
        let all = enumerate_self_dualities(&apexed_prism_complex(n).unwrap()).unwrap();
        (all.len(), all.iter().filter(|d| d.fixed_points.cell_fixed_point_free).count())
    };
    assert_eq!(count(3), (4, 1));
    assert_eq!(count(4), (4, 0));
    assert_eq!(count(5), (6, 1));
}

#[test]
fn enumeration_contains_canonical_duality_of_pentagon() {
    let fc = build_face_complex(&suspended_polygon(3, tol()).unwrap()).unwrap();
    let c = fc.to_abstract();
    let d = canonical_duality(&fc).unwrap();
    let all = enumerate_self_dualities(&c).unwrap();
    assert!(all.iter().any(|x| x.duality == d));
    let k = flag_complex(&c);
    for x in &all {
        assert_eq!(x.fixed_points, fixed_point_report(&x.duality, &k));
    }
}

#[test]
fn enumeration_refuses_large_complexes() {
    let c = apexed_prism_complex(12).unwrap();
    assert_eq!(enumerate_self_dualities(&c).unwrap_err(), Error::TooLarge(48));
}

#[test]
fn duality_round_trips_through_json() {
    let d = SelfDuality { vertex_to_facet: vec![1, 0], edge_to_edge: vec![0] };
    let s = serde_json::to_string(&d).unwrap();
    assert_eq!(serde_json::from_str::<SelfDuality>(&s).unwrap(), d);
}
