//! Dual arcs, the canonical self-duality, flag complexes and
//! self-duality enumeration.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::complex::{sorted2, AbstractComplex, AbstractEdge};
use crate::error::{Error, Result};
use crate::faces::FaceComplex;
use crate::geom::{ccw_delta, intersection_circle, AngularInterval, Circle3, Point3, Tolerance};
use crate::vazsonyi::diameter_graph;

/// Four points with all cross distances a–x, a–y, b–x, b–y equal to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DualArcPair {
    pub a: Point3,
    pub b: Point3,
    pub x: Point3,
    pub y: Point3,
    pub circle_xy: Circle3,
    pub circle_ab: Circle3,
    /// Short arc of C_xy from a to b (or b to a).
    pub short_arc_ab: AngularInterval,
    /// Short arc of C_ab joining x and y.
    pub short_arc_xy: AngularInterval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceClass {
    GreaterThan1,
    LessThan1,
    Equal1,
}

fn short_arc(circle: &Circle3, p: Point3, q: Point3, tol: &Tolerance) -> Result<AngularInterval> {
    let (tp, tq) = (circle.angle_of(p), circle.angle_of(q));
    let d = ccw_delta(tp, tq);
    if (d - PI).abs() <= tol.angle_eps || d <= tol.angle_eps {
        return Err(Error::InvalidSpec("arc endpoints are antipodal or equal".into()));
    }
    Ok(if d < PI { AngularInterval::new(tp, tq) } else { AngularInterval::new(tq, tp) })
}

impl DualArcPair {
    pub fn new(a: Point3, b: Point3, x: Point3, y: Point3, tol: &Tolerance) -> Result<Self> {
        for (p, q) in [(a, x), (a, y), (b, x), (b, y)] {
            if !tol.is_unit(p.dist(q)) {
                return Err(Error::InvalidSpec(format!("not in equilateral position: distance {}", p.dist(q))));
            }
        }
        let circle_xy = intersection_circle(x, y, tol)?;
        let circle_ab = intersection_circle(a, b, tol)?;
        let short_arc_ab = short_arc(&circle_xy, a, b, tol)?;
        let short_arc_xy = short_arc(&circle_ab, x, y, tol)?;
        Ok(DualArcPair { a, b, x, y, circle_xy, circle_ab, short_arc_ab, short_arc_xy })
    }
}

enum ArcPlace {
    End,
    Short,
    Long,
}

fn place(arc: &AngularInterval, theta: f64, tol: &Tolerance) -> ArcPlace {
    let near = |t: f64| ccw_delta(theta, t).min(ccw_delta(t, theta)) <= tol.angle_eps;
    if near(arc.start) || near(arc.end) {
        ArcPlace::End
    } else if arc.contains_interior(theta, 0.0) {
        ArcPlace::Short
    } else {
        ArcPlace::Long
    }
}

/// Classifies ‖c − z‖ against 1 from the positions of `c` on C_xy and `z`
/// on C_ab, and checks the verdict against the direct distance.
pub fn dual_arc_distance_classify(pair: &DualArcPair, c: Point3, z: Point3, tol: &Tolerance) -> Result<DistanceClass> {
    for (p, s, t) in [(c, pair.x, pair.y), (z, pair.a, pair.b)] {
        if !tol.is_unit(p.dist(s)) || !tol.is_unit(p.dist(t)) {
            return Err(Error::InvalidSpec("sample point is not on its circle".into()));
        }
    }
    let pc = place(&pair.short_arc_ab, pair.circle_xy.angle_of(c), tol);
    let pz = place(&pair.short_arc_xy, pair.circle_ab.angle_of(z), tol);
    let class = match (pc, pz) {
        (ArcPlace::End, _) | (_, ArcPlace::End) => DistanceClass::Equal1,
        (ArcPlace::Short, ArcPlace::Short) | (ArcPlace::Long, ArcPlace::Long) => DistanceClass::GreaterThan1,
        _ => DistanceClass::LessThan1,
    };
    let d = c.dist(z);
    let contradicts = match class {
        DistanceClass::GreaterThan1 => d < 1.0 - tol.eq_dist,
        DistanceClass::LessThan1 => d > 1.0 + tol.eq_dist,
        DistanceClass::Equal1 => (d - 1.0).abs() > tol.eq_dist + tol.angle_eps,
    };
    if contradicts {
        return Err(Error::ToleranceConflict(format!("classified {class:?} but ‖c − z‖ = {d}")));
    }
    Ok(class)
}

/// Vertex↔facet and edge↔edge involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDuality {
    pub vertex_to_facet: Vec<usize>,
    pub edge_to_edge: Vec<usize>,
}

impl SelfDuality {
    pub fn facet_to_vertex(&self) -> Vec<usize> {
        let mut inv = vec![usize::MAX; self.vertex_to_facet.len()];
        for (v, &f) in self.vertex_to_facet.iter().enumerate() {
            if f < inv.len() {
                inv[f] = v;
            }
        }
        inv
    }

    /// Bijectivity, involution and order reversal on all incidences.
    pub fn verify(&self, c: &AbstractComplex) -> Result<()> {
        let fail = |m: String| Err(Error::DualityFailure(m));
        let nv = c.num_vertices();
        if c.num_facets() != nv || self.vertex_to_facet.len() != nv || self.edge_to_edge.len() != c.num_edges() {
            return fail("tier sizes do not match".into());
        }
        let inv = self.facet_to_vertex();
        if inv.contains(&usize::MAX) {
            return fail("vertex map is not a bijection onto facets".into());
        }
        for (e, &d) in self.edge_to_edge.iter().enumerate() {
            if d >= c.num_edges() || self.edge_to_edge[d] != e {
                return fail(format!("edge map is not an involution at edge {e}"));
            }
        }
        let m = c.vertex_facet_incidence();
        for v in 0..nv {
            for f in 0..nv {
                // v ∈ F  ⇔  φ(F) ∈ φ(v)
                if m[v][f] != m[inv[f]][self.vertex_to_facet[v]] {
                    return fail(format!("vertex {v} / facet {f} incidence not reversed"));
                }
            }
        }
        for (i, e) in c.edges.iter().enumerate() {
            let img = &c.edges[self.edge_to_edge[i]];
            for &v in &e.vertices {
                if !img.facets.contains(&self.vertex_to_facet[v]) {
                    return fail(format!("vertex {v} of edge {i} not reversed"));
                }
            }
            for &f in &e.facets {
                if !img.vertices.contains(&inv[f]) {
                    return fail(format!("facet {f} of edge {i} not reversed"));
                }
            }
        }
        Ok(())
    }
}

/// The canonical self-duality x ↦ F_x of an extremal configuration's
/// face complex.
pub fn canonical_duality(fc: &FaceComplex) -> Result<SelfDuality> {
    let v = &fc.config;
    let n = v.len();
    let scaled = v.scaled(1.0 / v.diameter())?;
    let dg = diameter_graph(&scaled)?;
    if n < 4 || dg.e_count() != 2 * n - 2 {
        return Err(Error::NotExtremalInput(format!("e(V) = {}, 2n - 2 = {}", dg.e_count(), 2 * n.max(1) - 2)));
    }
    if fc.num_vertices() != n {
        return Err(Error::NotExtremalInput(format!("{} vertices for {n} generators", fc.num_vertices())));
    }
    let mut vertex_to_facet = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for x in &fc.vertices {
        let g = (0..n)
            .find(|&g| !taken[g] && x.position.dist(v.point(g)) <= v.tol.vertex_merge)
            .ok_or_else(|| Error::NotExtremalInput(format!("vertex {} is not a generator", x.id)))?;
        taken[g] = true;
        vertex_to_facet[x.id] = g;
    }
    let mut table: BTreeMap<([usize; 2], [usize; 2]), Vec<usize>> = BTreeMap::new();
    for e in &fc.edges {
        let ends = sorted2([vertex_to_facet[e.endpoints[0]], vertex_to_facet[e.endpoints[1]]]);
        table.entry((ends, e.generator_pair)).or_default().push(e.id);
    }
    let mut edge_to_edge = Vec::with_capacity(fc.num_edges());
    for e in &fc.edges {
        let ends = sorted2([vertex_to_facet[e.endpoints[0]], vertex_to_facet[e.endpoints[1]]]);
        match table.get(&(e.generator_pair, ends)).map(Vec::as_slice) {
            Some([d]) => edge_to_edge.push(*d),
            Some(_) => return Err(Error::DualityFailure(format!("edge {} has several dual candidates", e.id))),
            None => return Err(Error::DualityFailure(format!("edge {} has no dual edge", e.id))),
        }
    }
    let d = SelfDuality { vertex_to_facet, edge_to_edge };
    d.verify(&fc.to_abstract())?;
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Face {
    Vertex(usize),
    Edge(usize),
    Facet(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagNode {
    pub face: Face,
    pub position: Option<Point3>,
}

/// Barycentric subdivision: one node per face, one simplex per chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlagComplex {
    pub nodes: Vec<FlagNode>,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_facets: usize,
    /// 1-simplices as node pairs.
    pub segments: Vec<[usize; 2]>,
    /// Maximal flags (vertex node, edge node, facet node).
    pub triangles: Vec<[usize; 3]>,
}

impl FlagComplex {
    pub fn vertex_node(&self, v: usize) -> usize {
        v
    }

    pub fn edge_node(&self, e: usize) -> usize {
        self.num_vertices + e
    }

    pub fn facet_node(&self, f: usize) -> usize {
        self.num_vertices + self.num_edges + f
    }

    /// Every simplex, as sorted node lists.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = (0..self.nodes.len()).map(|i| vec![i]).collect();
        out.extend(self.segments.iter().map(|s| s.to_vec()));
        out.extend(self.triangles.iter().map(|t| t.to_vec()));
        for s in out.iter_mut() {
            s.sort_unstable();
        }
        out
    }

    /// Image of a node under the automorphism induced by `d`.
    pub fn node_image(&self, d: &SelfDuality, node: usize) -> usize {
        let inv = d.facet_to_vertex();
        match self.nodes[node].face {
            Face::Vertex(v) => self.facet_node(d.vertex_to_facet[v]),
            Face::Edge(e) => self.edge_node(d.edge_to_edge[e]),
            Face::Facet(f) => self.vertex_node(inv[f]),
        }
    }
}

/// Flag complex of an abstract complex, without realization.
pub fn flag_complex(c: &AbstractComplex) -> FlagComplex {
    let (nv, ne, nf) = (c.num_vertices(), c.num_edges(), c.num_facets());
    let mut nodes: Vec<FlagNode> = (0..nv).map(|v| FlagNode { face: Face::Vertex(v), position: None }).collect();
    nodes.extend((0..ne).map(|e| FlagNode { face: Face::Edge(e), position: None }));
    nodes.extend((0..nf).map(|f| FlagNode { face: Face::Facet(f), position: None }));
    let mut segments = Vec::new();
    let mut triangles = Vec::new();
    for (i, e) in c.edges.iter().enumerate() {
        for &v in &e.vertices {
            segments.push([v, nv + i]);
        }
        for &f in &e.facets {
            segments.push([nv + i, nv + ne + f]);
            for &v in &e.vertices {
                triangles.push([v, nv + i, nv + ne + f]);
            }
        }
    }
    let m = c.vertex_facet_incidence();
    for (v, row) in m.iter().enumerate() {
        for (f, &inc) in row.iter().enumerate() {
            if inc {
                segments.push([v, nv + ne + f]);
            }
        }
    }
    FlagComplex { nodes, num_vertices: nv, num_edges: ne, num_facets: nf, segments, triangles }
}

/// Flag complex of a face complex with its curvilinear realization:
/// vertices at themselves, edges at arc midpoints, facets at a point of
/// their relative interior.
pub fn barycentric_subdivision(fc: &FaceComplex) -> Result<FlagComplex> {
    let mut k = flag_complex(&fc.to_abstract());
    for (i, x) in fc.vertices.iter().enumerate() {
        k.nodes[i].position = Some(x.position);
    }
    for (i, e) in fc.edges.iter().enumerate() {
        let n = k.edge_node(i);
        k.nodes[n].position = Some(e.midpoint());
    }
    for p in 0..fc.num_facets() {
        let n = k.facet_node(p);
        k.nodes[n].position = Some(fc.facet_center(p)?);
    }
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointReport {
    /// No simplex is mapped onto itself.
    pub cell_fixed_point_free: bool,
    /// Every simplex is disjoint from its image.
    pub vertex_disjoint: bool,
}

pub fn fixed_point_report(d: &SelfDuality, k: &FlagComplex) -> FixedPointReport {
    let img: Vec<usize> = (0..k.nodes.len()).map(|n| k.node_image(d, n)).collect();
    let mut cell = true;
    let mut disjoint = true;
    for s in k.simplices() {
        let mut t: Vec<usize> = s.iter().map(|&n| img[n]).collect();
        t.sort_unstable();
        if t == s {
            cell = false;
        }
        if t.iter().any(|n| s.contains(n)) {
            disjoint = false;
        }
    }
    FixedPointReport { cell_fixed_point_free: cell, vertex_disjoint: disjoint }
}

pub fn is_fixed_point_free(d: &SelfDuality, k: &FlagComplex) -> bool {
    fixed_point_report(d, k).cell_fixed_point_free
}

/// Face complex of a pyramid glued onto one base of an n-prism.
///
/// Vertices: `q` (0), `a1..an` (1..=n), `b1..bn` (n+1..=2n). Facets: `Q`
/// (0), quadrilaterals `B1..Bn` (1..=n), triangles `A1..An` (n+1..=2n).
pub fn apexed_prism_complex(n: usize) -> Result<AbstractComplex> {
    if n < 3 {
        return Err(Error::InvalidOrder(n));
    }
    let a = |i: usize| 1 + i % n;
    let b = |i: usize| 1 + n + i % n;
    let quad = |i: usize| 1 + i % n;
    let tri = |i: usize| 1 + n + i % n;
    let prev = |i: usize| (i + n - 1) % n;
    let mut edges = Vec::new();
    let base: Vec<usize> = (0..n)
        .map(|i| {
            edges.push(AbstractEdge { vertices: [a(i), a(i + 1)], facets: [0, quad(i)] });
            edges.len() - 1
        })
        .collect();
    let vertical: Vec<usize> = (0..n)
        .map(|i| {
            edges.push(AbstractEdge { vertices: [a(i), b(i)], facets: [quad(prev(i)), quad(i)] });
            edges.len() - 1
        })
        .collect();
    let ring: Vec<usize> = (0..n)
        .map(|i| {
            edges.push(AbstractEdge { vertices: [b(i), b(i + 1)], facets: [quad(i), tri(i)] });
            edges.len() - 1
        })
        .collect();
    let apex: Vec<usize> = (0..n)
        .map(|i| {
            edges.push(AbstractEdge { vertices: [0, b(i)], facets: [tri(prev(i)), tri(i)] });
            edges.len() - 1
        })
        .collect();
    let mut facet_boundaries = vec![base.clone()];
    for i in 0..n {
        facet_boundaries.push(vec![base[i], vertical[(i + 1) % n], ring[i], vertical[i]]);
    }
    for i in 0..n {
        facet_boundaries.push(vec![apex[i], ring[i], apex[(i + 1) % n]]);
    }
    let mut vertex_names = vec!["q".to_string()];
    vertex_names.extend((1..=n).map(|i| format!("a{i}")));
    vertex_names.extend((1..=n).map(|i| format!("b{i}")));
    let mut facet_names = vec!["Q".to_string()];
    facet_names.extend((1..=n).map(|i| format!("B{i}")));
    facet_names.extend((1..=n).map(|i| format!("A{i}")));
    let c = AbstractComplex { vertex_names, facet_names, edges, facet_boundaries };
    c.validate()?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedDuality {
    pub duality: SelfDuality,
    pub fixed_points: FixedPointReport,
}

/// Tier size above which enumeration refuses to run.
pub const ENUMERATION_LIMIT: usize = 40;

/// All involutory self-dualities of a small complex.
pub fn enumerate_self_dualities(c: &AbstractComplex) -> Result<Vec<ClassifiedDuality>> {
    let biggest = c.num_vertices().max(c.num_edges()).max(c.num_facets());
    if biggest > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(biggest));
    }
    let nv = c.num_vertices();
    if c.num_facets() != nv {
        return Ok(Vec::new());
    }
    let m = c.vertex_facet_incidence();
    let val: Vec<usize> = (0..nv).map(|v| c.vertex_valence(v)).collect();
    let mut order: Vec<usize> = (0..nv).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(val[v]), v));
    let mut sigma = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    let mut found = Vec::new();
    search_sigma(c, &m, &val, &order, 0, &mut sigma, &mut used, &mut found);
    let k = flag_complex(c);
    let mut out = Vec::new();
    for d in found {
        if d.verify(c).is_ok() {
            let fixed_points = fixed_point_report(&d, &k);
            out.push(ClassifiedDuality { duality: d, fixed_points });
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search_sigma(
    c: &AbstractComplex,
    m: &[Vec<bool>],
    val: &[usize],
    order: &[usize],
    k: usize,
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<SelfDuality>,
) {
    if k == order.len() {
        extend_to_edges(c, sigma, found);
        return;
    }
    let v = order[k];
    for f in 0..c.num_facets() {
        if used[f] || c.facet_size(f) != val[v] {
            continue;
        }
        sigma[v] = f;
        // m[v][σ(w)] must equal m[w][σ(v)] for all assigned w
        let ok = order[..=k].iter().all(|&w| m[v][sigma[w]] == m[w][f]);
        if ok {
            used[f] = true;
            search_sigma(c, m, val, order, k + 1, sigma, used, found);
            used[f] = false;
        }
        sigma[v] = usize::MAX;
    }
}

fn extend_to_edges(c: &AbstractComplex, sigma: &[usize], found: &mut Vec<SelfDuality>) {
    let nv = sigma.len();
    let mut tau = vec![0; nv];
    for (v, &f) in sigma.iter().enumerate() {
        tau[f] = v;
    }
    let cands: Vec<Vec<usize>> = c
        .edges
        .iter()
        .map(|e| {
            let want_f = sorted2([sigma[e.vertices[0]], sigma[e.vertices[1]]]);
            let want_v = sorted2([tau[e.facets[0]], tau[e.facets[1]]]);
            (0..c.num_edges())
                .filter(|&j| sorted2(c.edges[j].facets) == want_f && sorted2(c.edges[j].vertices) == want_v)
                .collect()
        })
        .collect();
    let mut phi = vec![usize::MAX; c.num_edges()];
    pair_edges(&cands, 0, &mut phi, sigma, found);
}

fn pair_edges(cands: &[Vec<usize>], e: usize, phi: &mut Vec<usize>, sigma: &[usize], found: &mut Vec<SelfDuality>) {
    if e == cands.len() {
        found.push(SelfDuality { vertex_to_facet: sigma.to_vec(), edge_to_edge: phi.clone() });
        return;
    }
    if phi[e] != usize::MAX {
        pair_edges(cands, e + 1, phi, sigma, found);
        return;
    }
    for &d in &cands[e] {
        if phi[d] != usize::MAX || !cands[d].contains(&e) {
            continue;
        }
        phi[e] = d;
        phi[d] = e;
        pair_edges(cands, e + 1, phi, sigma, found);
        phi[e] = usize::MAX;
        phi[d] = usize::MAX;
    }
}
