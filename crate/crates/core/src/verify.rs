//! Invariant suite run by `--verify`: structural checks on the face
//! complex plus a seeded sampling comparison against the definition of
//! the facets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::duality::{barycentric_subdivision, canonical_duality, fixed_point_report};
use crate::error::Result;
use crate::faces::{build_face_complex, FaceComplex};
use crate::geom::{intersection_circle, Point3};
use crate::vazsonyi::check_extremal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.to_string(), passed, detail: detail.into() });
    }
}

/// Uniform point on the unit sphere around `c`.
pub fn random_on_sphere<R: Rng>(rng: &mut R, c: Point3) -> Point3 {
    loop {
        let p = Point3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n2 = p.norm2();
        if n2 > 1e-6 && n2 <= 1.0 {
            return c + p / n2.sqrt();
        }
    }
}

/// Generators sharing an edge with facet `p`.
pub fn edge_neighbours(fc: &FaceComplex, p: usize) -> Vec<usize> {
    let mut out: Vec<usize> = fc.facets[p]
        .boundary_edges
        .iter()
        .map(|&e| {
            let [a, b] = fc.edges[e].generator_pair;
            if a == p {
                b
            } else {
                a
            }
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn structural_checks(fc: &FaceComplex, rep: &mut VerificationReport) {
    let v = &fc.config;
    let tol = v.tol;
    rep.record("euler", fc.euler_characteristic() == 2, format!("v - e + f = {}", fc.euler_characteristic()));
    let val = fc.vertex_valence_check();
    let bad: Vec<usize> = val.rows.iter().filter(|r| !r.ok).map(|r| r.vertex).collect();
    rep.record("valence_census", bad.is_empty(), format!("mismatched vertices {bad:?}"));
    rep.record("two_connected", fc.is_two_connected(), "1-skeleton 2-connectivity");
    let outside: Vec<usize> = fc
        .vertices
        .iter()
        .filter(|x| v.points().iter().any(|g| g.dist(x.position) > 1.0 + tol.eq_dist))
        .map(|x| x.id)
        .collect();
    rep.record("vertices_in_ball_set", outside.is_empty(), format!("outside B(V): {outside:?}"));
    let off_circle: Vec<usize> = fc
        .edges
        .iter()
        .filter(|e| {
            let [p, q] = e.generator_pair;
            [0.0, 0.5, 1.0].iter().any(|&t| {
                let x = e.point_at(t);
                !tol.is_unit(x.dist(v.point(p))) || !tol.is_unit(x.dist(v.point(q)))
            })
        })
        .map(|e| e.id)
        .collect();
    rep.record("edges_on_circles", off_circle.is_empty(), format!("edges off C_pq: {off_circle:?}"));
    let mut too_many = Vec::new();
    for p in 0..v.len() {
        for q in p + 1..v.len() {
            let count = fc.edges.iter().filter(|e| e.generator_pair == [p, q]).count();
            if intersection_circle(v.point(p), v.point(q), &tol).is_ok() && count > v.len().saturating_sub(2) {
                too_many.push([p, q]);
            }
        }
    }
    rep.record("component_bound", too_many.is_empty(), format!("pairs with more than n - 2 edges: {too_many:?}"));
    let a = fc.to_abstract();
    rep.record("abstract_complex", a.validate().is_ok(), "edge/facet incidences form circuits");
}

// Facet membership from the definition versus from the edge-neighbour
// balls recorded in the complex, away from a thin shell.
fn sampling_check(fc: &FaceComplex, seed: u64, samples: usize, rep: &mut VerificationReport) {
    let v = &fc.config;
    let shell = 1e-6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagree = 0usize;
    let mut counted = 0usize;
    for p in 0..v.len() {
        let nb = edge_neighbours(fc, p);
        for _ in 0..samples {
            let z = random_on_sphere(&mut rng, v.point(p));
            let dists: Vec<f64> = v.points().iter().map(|g| z.dist(*g)).collect();
            let near_shell = (0..v.len()).any(|g| g != p && (dists[g] - 1.0).abs() < shell);
            if near_shell {
                continue;
            }
            counted += 1;
            let truth = (0..v.len()).all(|g| g == p || dists[g] < 1.0);
            let predicted =
                if fc.facets[p].boundary_edges.is_empty() { truth } else { nb.iter().all(|&g| dists[g] < 1.0) };
            if truth != predicted {
                disagree += 1;
            }
        }
    }
    rep.record("facet_sampling", disagree == 0, format!("{disagree} disagreements in {counted} samples (seed {seed})"));
}

/// Runs every structural check and, for extremal input, the duality
/// checks. Errors from construction are returned as errors, not as
/// failed checks.
pub fn run_invariant_suite(v: &Configuration, seed: u64) -> Result<VerificationReport> {
    let mut rep = VerificationReport::default();
    let fc = build_face_complex(v)?;
    structural_checks(&fc, &mut rep);
    sampling_check(&fc, seed, 2000, &mut rep);
    if v.len() >= 4 {
        let verdict = check_extremal(v)?;
        rep.record(
            "ghs_cross_check",
            verdict.ghs_cross_check,
            format!("e = {}, bound = {}", verdict.e_count, verdict.bound),
        );
        let unit = (v.diameter() - 1.0).abs() <= v.tol.eq_dist;
        if verdict.is_extremal && unit {
            let short: Vec<usize> = fc.edges.iter().filter(|e| !e.is_short).map(|e| e.id).collect();
            rep.record("edges_short", short.is_empty(), format!("long edges {short:?}"));
            match canonical_duality(&fc) {
                Ok(d) => {
                    rep.record("canonical_duality", true, "involution and order reversal verified");
                    let k = barycentric_subdivision(&fc)?;
                    let fp = fixed_point_report(&d, &k);
                    rep.record("fixed_point_free", fp.cell_fixed_point_free, "no flag cell mapped to itself");
                    rep.record("vertex_disjoint", fp.vertex_disjoint, "every cell disjoint from its image");
                }
                Err(e) => rep.record("canonical_duality", false, e.to_string()),
            }
        }
    }
    Ok(rep)
}
