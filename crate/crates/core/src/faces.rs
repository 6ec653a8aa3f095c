//! The spherical face complex of B(V): facets, edges, principal and
//! dangling vertices, boundary circuits and skeleton checks.
//!
//! Generator indices used throughout are positions in the configuration;
//! use [`Configuration::label`] to report stable labels.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::ball_hull::{essential_points, in_ball_set};
use crate::complex::{AbstractComplex, AbstractEdge};
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geom::{
    ball_arc_with_radius, ccw_delta, intersection_circle, interval_set_intersect, AngularInterval, AngularIntervalSet,
    Circle3, Point3, Tolerance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Principal,
    Dangling,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub position: Point3,
    pub kind: VertexKind,
    /// Generators at distance 1, sorted.
    pub incident_generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub circle: Circle3,
    /// Sorted generator pair {p, q}; the edge lies on C_pq.
    pub generator_pair: [usize; 2],
    pub interval: AngularInterval,
    /// Vertices at `interval.start` and `interval.end`.
    pub endpoints: [usize; 2],
    pub is_short: bool,
}

impl Edge {
    pub fn length(&self) -> f64 {
        self.interval.length()
    }

    pub fn midpoint(&self) -> Point3 {
        self.circle.midpoint(&self.interval)
    }

    /// Point at fraction `t` of the arc from its start vertex.
    pub fn point_at(&self, t: f64) -> Point3 {
        self.circle.at(self.interval.start + t * self.interval.length())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub generator: usize,
    /// `boundary_edges[k]` joins `boundary_vertices[k]` and
    /// `boundary_vertices[k + 1]` (cyclically), counterclockwise seen from
    /// outside B(V).
    pub boundary_vertices: Vec<usize>,
    pub boundary_edges: Vec<usize>,
    pub is_digonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceComplex {
    pub config: Configuration,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Indexed by generator position.
    pub facets: Vec<Facet>,
    /// Point on each facet, maximizing the distance-1 slack.
    pub facet_witnesses: Vec<Point3>,
}

/// Components of F_p ∩ F_q on C_pq.
pub fn facet_components(p: usize, q: usize, v: &Configuration) -> Result<AngularIntervalSet> {
    let circle = intersection_circle(v.point(p), v.point(q), &v.tol)?;
    pair_components(&circle, p, q, v)
}

fn pair_components(circle: &Circle3, p: usize, q: usize, v: &Configuration) -> Result<AngularIntervalSet> {
    let tol = v.tol;
    let radius = 1.0 + tol.eq_dist;
    let mut acc = AngularIntervalSet::full();
    for k in 0..v.len() {
        if k == p || k == q {
            continue;
        }
        let arc = ball_arc_with_radius(circle, v.point(k), radius);
        acc = interval_set_intersect(&acc, &arc, &tol);
        if acc.is_empty() {
            return Ok(acc);
        }
    }
    if acc.full_circle && v.len() >= 3 {
        return Err(Error::InternalInvariantViolation(format!("F_{p} ∩ F_{q} is the full circle")));
    }
    // arcs shorter than the vertex merge radius are single points
    for iv in acc.intervals.iter_mut() {
        if !iv.is_point() && circle.radius * iv.length() < tol.vertex_merge {
            *iv = AngularInterval::point(iv.midpoint());
        }
    }
    if acc.intervals.len() > v.len().saturating_sub(2) {
        return Err(Error::InternalInvariantViolation(format!("F_{p} ∩ F_{q} has {} components", acc.intervals.len())));
    }
    Ok(acc)
}

struct PairData {
    p: usize,
    q: usize,
    circle: Circle3,
    comps: Vec<AngularInterval>,
}

struct Candidate {
    pos: Point3,
    pair: (usize, usize),
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Largest move allowed when settling an arc endpoint on its third sphere.
const SETTLE_RADIUS: f64 = 1e-4;

/// Moves `x` onto the common unit sphere of the generators by Gauss–Newton.
fn refine_vertex(mut x: Point3, gens: &[Point3]) -> Point3 {
    for _ in 0..6 {
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        for g in gens {
            let d = x - *g;
            let r = (d.norm2() - 1.0) / 2.0;
            let j = d.to_array();
            for a in 0..3 {
                jtr[a] += j[a] * r;
                for b in 0..3 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let rows = [Point3::from(jtj[0]), Point3::from(jtj[1]), Point3::from(jtj[2])];
        let Some(step) = crate::geom::solve3(rows, jtr, 1e-12) else { break };
        x = x - step;
        if step.norm() < 1e-17 {
            break;
        }
    }
    x
}

/// Builds SF(B(V)).
pub fn build_face_complex(v: &Configuration) -> Result<FaceComplex> {
    let tol = v.tol;
    let n = v.len();
    if n < 3 {
        return Err(Error::InvalidSpec(format!("face complex needs at least 3 points, got {n}")));
    }
    let report = essential_points(v)?;
    if !report.is_tight() {
        return Err(Error::NotTight(report.inessential.clone()));
    }
    let witnesses: Vec<Point3> = (0..n).map(|i| report.witnesses[&v.label(i)]).collect();

    // (1) components of every facet pair
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            let Ok(circle) = intersection_circle(v.point(p), v.point(q), &tol) else { continue };
            let set = pair_components(&circle, p, q, v)?;
            if !set.is_empty() {
                pairs.push(PairData { p, q, circle, comps: set.intervals });
            }
        }
    }

    // (2) principal vertices from component endpoints
    let mut cands = Vec::new();
    for pd in &pairs {
        for iv in &pd.comps {
            cands.push(Candidate { pos: pd.circle.at(iv.start), pair: (pd.p, pd.q) });
            if !iv.is_point() {
                cands.push(Candidate { pos: pd.circle.at(iv.end), pair: (pd.p, pd.q) });
            }
        }
    }
    // settle each endpoint on the third sphere that cuts it off
    for c in cands.iter_mut() {
        let (p, q) = c.pair;
        let cut = (0..n).filter(|&k| k != p && k != q).min_by(|&a, &b| {
            let da = (c.pos.dist(v.point(a)) - 1.0).abs();
            let db = (c.pos.dist(v.point(b)) - 1.0).abs();
            da.total_cmp(&db)
        });
        if let Some(k) = cut {
            let settled = refine_vertex(c.pos, &[v.point(p), v.point(q), v.point(k)]);
            if settled.dist(c.pos) <= SETTLE_RADIUS {
                c.pos = settled;
            }
        }
    }
    let mut dsu = Dsu((0..cands.len()).collect());
    for a in 0..cands.len() {
        for b in a + 1..cands.len() {
            if cands[a].pos.dist(cands[b].pos) <= tol.vertex_merge {
                dsu.union(a, b);
            }
        }
    }
    let mut cluster_of = vec![usize::MAX; cands.len()];
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for a in 0..cands.len() {
        let r = dsu.find(a);
        if cluster_of[r] == usize::MAX {
            cluster_of[r] = members.len();
            members.push(Vec::new());
        }
        cluster_of[a] = cluster_of[r];
        members[cluster_of[r]].push(a);
    }
    for (id, mem) in members.iter().enumerate() {
        let centroid = mem.iter().fold(Point3::ORIGIN, |s, &a| s + cands[a].pos) / mem.len() as f64;
        let mut gens: BTreeSet<usize> = mem.iter().flat_map(|&a| [cands[a].pair.0, cands[a].pair.1]).collect();
        gens.extend((0..n).filter(|&g| (centroid.dist(v.point(g)) - 1.0).abs() <= tol.vertex_merge));
        let gen_pts: Vec<Point3> = gens.iter().map(|&g| v.point(g)).collect();
        let pos = refine_vertex(centroid, &gen_pts);
        if pos.dist(centroid) > tol.vertex_merge {
            return Err(Error::ToleranceConflict(format!(
                "vertex near {centroid:?} does not settle on its {} spheres",
                gens.len()
            )));
        }
        for &g in &gens {
            let d = pos.dist(v.point(g));
            if !tol.is_unit(d) {
                return Err(Error::ToleranceConflict(format!(
                    "vertex {id}: generator {g} at distance {d} after refinement"
                )));
            }
        }
        if gens.len() < 3 {
            return Err(Error::ToleranceConflict(format!("vertex {id} lies on only {} facets", gens.len())));
        }
        if !in_ball_set(v, pos) {
            return Err(Error::ToleranceConflict(format!("vertex {id} leaves B(V) after refinement")));
        }
        vertices.push(Vertex {
            id,
            position: pos,
            kind: VertexKind::Principal,
            incident_generators: gens.into_iter().collect(),
        });
    }
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            if vertices[a].position.dist(vertices[b].position) <= tol.vertex_merge {
                return Err(Error::ToleranceConflict(format!("vertices {a} and {b} merge after refinement")));
            }
        }
    }

    // (3) dangling vertices
    for k in 0..n {
        let x = v.point(k);
        let unit: Vec<usize> = (0..n).filter(|&g| g != k && tol.is_unit(x.dist(v.point(g)))).collect();
        if unit.len() != 2 || !in_ball_set(v, x) {
            continue;
        }
        let (a, b) = (unit[0], unit[1]);
        if let Some(pv) = vertices.iter().find(|pv| pv.position.dist(x) <= tol.vertex_merge) {
            return Err(Error::ToleranceConflict(format!(
                "generator {k} sits on principal vertex {} but lies on only two facets",
                pv.id
            )));
        }
        let Some(pd) = pairs.iter().find(|pd| pd.p == a && pd.q == b) else {
            return Err(Error::InternalInvariantViolation(format!(
                "generator {k} lies on F_{a} ∩ F_{b} but no component"
            )));
        };
        let theta = pd.circle.angle_of(x);
        let Some(iv) = pd.comps.iter().find(|iv| iv.contains(theta, tol.angle_eps)) else {
            return Err(Error::InternalInvariantViolation(format!(
                "generator {k} outside every component of F_{a} ∩ F_{b}"
            )));
        };
        if iv.is_point() || !iv.contains_interior(theta, tol.angle_eps) {
            return Err(Error::ToleranceConflict(format!(
                "generator {k} is at an end of its component; principal or dangling is ambiguous"
            )));
        }
        let id = vertices.len();
        vertices.push(Vertex { id, position: x, kind: VertexKind::Dangling, incident_generators: vec![a, b] });
    }

    // (4) edges: components split at interior vertices
    let mut edges: Vec<Edge> = Vec::new();
    let mut cand_idx = 0;
    for pd in &pairs {
        for iv in &pd.comps {
            let start_v = cluster_of[cand_idx];
            cand_idx += 1;
            if iv.is_point() {
                continue;
            }
            let end_v = cluster_of[cand_idx];
            cand_idx += 1;
            // a slack-widened isolated point: both ends settle on one vertex
            if start_v == end_v && pd.circle.radius * iv.length() <= SETTLE_RADIUS {
                continue;
            }
            let mut stops: Vec<(f64, usize)> = vertices
                .iter()
                .filter(|x| x.id != start_v && x.id != end_v)
                .filter(|x| x.incident_generators.contains(&pd.p) && x.incident_generators.contains(&pd.q))
                .filter_map(|x| {
                    let th = pd.circle.angle_of(x.position);
                    iv.contains_interior(th, tol.angle_eps).then(|| (ccw_delta(iv.start, th), x.id))
                })
                .collect();
            stops.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut chain = vec![start_v];
            chain.extend(stops.iter().map(|s| s.1));
            chain.push(end_v);
            for w in chain.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::NonGenericUnsupported(format!(
                        "closed arc on C_{{{},{}}} returns to vertex {}",
                        pd.p, pd.q, w[0]
                    )));
                }
                let s = pd.circle.angle_of(vertices[w[0]].position);
                let e = pd.circle.angle_of(vertices[w[1]].position);
                let interval = AngularInterval::new(s, e);
                let id = edges.len();
                edges.push(Edge {
                    id,
                    circle: pd.circle,
                    generator_pair: [pd.p, pd.q],
                    interval,
                    endpoints: [w[0], w[1]],
                    is_short: short_by_length(interval.length(), &tol),
                });
            }
        }
    }

    // (5) boundary circuits
    let facets = witnesses
        .iter()
        .enumerate()
        .map(|(p, &w)| facet_circuit(p, &vertices, &edges, v, w))
        .collect::<Result<Vec<_>>>()?;

    let fc = FaceComplex { config: v.clone(), vertices, edges, facets, facet_witnesses: witnesses };

    // (6) global invariants
    if fc.euler_characteristic() != 2 {
        return Err(Error::InternalInvariantViolation(format!(
            "v - e + f = {} - {} + {} != 2",
            fc.num_vertices(),
            fc.num_edges(),
            fc.num_facets()
        )));
    }
    for x in &fc.vertices {
        let on = fc.facets.iter().filter(|f| f.boundary_vertices.contains(&x.id)).count();
        if on != x.incident_generators.len() {
            return Err(Error::InternalInvariantViolation(format!(
                "vertex {} lies on {on} facet boundaries but has {} incident generators",
                x.id,
                x.incident_generators.len()
            )));
        }
    }
    Ok(fc)
}

fn short_by_length(len: f64, tol: &Tolerance) -> bool {
    len < PI - tol.angle_eps
}

fn facet_circuit(p: usize, vertices: &[Vertex], edges: &[Edge], v: &Configuration, witness: Point3) -> Result<Facet> {
    let mine: Vec<usize> = edges.iter().filter(|e| e.generator_pair.contains(&p)).map(|e| e.id).collect();
    if mine.is_empty() {
        return Err(Error::InternalInvariantViolation(format!("facet {p} has no boundary edges")));
    }
    let mut degree = vec![0usize; vertices.len()];
    for &e in &mine {
        for &x in &edges[e].endpoints {
            degree[x] += 1;
        }
    }
    if let Some(x) = degree.iter().position(|&d| d > 2) {
        return Err(Error::NonGenericUnsupported(format!("facet {p} touches vertex {x} more than twice")));
    }
    if let Some(x) = degree.iter().position(|&d| d == 1) {
        return Err(Error::InternalInvariantViolation(format!("facet {p} boundary ends at vertex {x}")));
    }
    let mut used = vec![false; edges.len()];
    let first = mine[0];
    let mut bv = vec![edges[first].endpoints[0]];
    let mut be = vec![first];
    used[first] = true;
    let mut at = edges[first].endpoints[1];
    while at != bv[0] {
        let next =
            mine.iter().copied().find(|&e| !used[e] && edges[e].endpoints.contains(&at)).ok_or_else(|| {
                Error::InternalInvariantViolation(format!("facet {p} boundary breaks at vertex {at}"))
            })?;
        used[next] = true;
        bv.push(at);
        be.push(next);
        let ep = edges[next].endpoints;
        at = if ep[0] == at { ep[1] } else { ep[0] };
    }
    if be.len() != mine.len() {
        return Err(Error::NonGenericUnsupported(format!("facet {p} boundary has several circuits")));
    }
    // orient counterclockwise around the outward axis
    let gp = v.point(p);
    let axis = (witness - gp).normalized().unwrap_or(Point3::Z);
    let mut poly = Vec::new();
    for k in 0..be.len() {
        poly.push(vertices[bv[k]].position);
        poly.push(edges[be[k]].midpoint());
    }
    let center = witness;
    let mut turn = 0.0;
    for k in 0..poly.len() {
        let (a, b) = (poly[k] - center, poly[(k + 1) % poly.len()] - center);
        turn += a.cross(b).dot(axis);
    }
    if turn < 0.0 {
        bv[1..].reverse();
        be.reverse();
    }
    let principal = bv.iter().filter(|&&x| vertices[x].kind == VertexKind::Principal).count();
    if principal < 2 {
        return Err(Error::InternalInvariantViolation(format!("facet {p} has {principal} principal vertices")));
    }
    let is_digonal = bv.len() == 2 && principal == 2;
    Ok(Facet { generator: p, boundary_vertices: bv, boundary_edges: be, is_digonal })
}

impl FaceComplex {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_facets() as i64
    }

    pub fn dangling_vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|x| x.kind == VertexKind::Dangling)
    }

    pub fn principal_vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter().filter(|x| x.kind == VertexKind::Principal)
    }

    /// Number of edge ends at each vertex.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.num_vertices()];
        for e in &self.edges {
            val[e.endpoints[0]] += 1;
            val[e.endpoints[1]] += 1;
        }
        val
    }

    /// 2-connectivity of the 1-skeleton multigraph.
    pub fn is_two_connected(&self) -> bool {
        let links: Vec<[usize; 2]> = self.edges.iter().map(|e| e.endpoints).collect();
        multigraph_two_connected(self.num_vertices(), &links)
    }

    /// Shortness of an edge, cross-checked against the side-of-plane test.
    pub fn edge_is_short(&self, id: usize) -> Result<bool> {
        let e = &self.edges[id];
        let tol = self.config.tol;
        let short = short_by_length(e.length(), &tol);
        let a = self.vertices[e.endpoints[0]].position;
        let b = self.vertices[e.endpoints[1]].position;
        let mid = e.midpoint();
        for (x, y) in [(e.generator_pair[0], e.generator_pair[1]), (e.generator_pair[1], e.generator_pair[0])] {
            if self.facets[x].boundary_vertices.len() < 3 {
                continue;
            }
            let xp = self.config.point(x);
            let Some(normal) = (a - xp).cross(b - xp).normalized() else { continue };
            let side_e = normal.dot(mid - xp);
            let side_y = normal.dot(self.config.point(y) - xp);
            if side_e.abs() <= tol.eq_dist || side_y.abs() <= tol.eq_dist {
                continue;
            }
            let different = (side_e > 0.0) != (side_y > 0.0);
            if different != short {
                return Err(Error::ToleranceConflict(format!(
                    "edge {id}: arc length {} disagrees with the plane test through generator {x}",
                    e.length()
                )));
            }
            break;
        }
        Ok(short)
    }

    /// Per-vertex comparison of skeleton valence with the distance-1 census.
    pub fn vertex_valence_check(&self) -> ValenceReport {
        let val = self.valences();
        let tol = self.config.tol;
        let rows = self
            .vertices
            .iter()
            .map(|x| {
                let census =
                    (0..self.config.len()).filter(|&g| tol.is_unit(x.position.dist(self.config.point(g)))).count();
                ValenceRow { vertex: x.id, valence: val[x.id], distance_one_count: census, ok: val[x.id] == census }
            })
            .collect();
        ValenceReport { rows }
    }

    /// Point of facet `p` used as its center: normalized mean direction of
    /// its vertices on S(p), or the facet witness when that mean is not
    /// strictly inside.
    pub fn facet_center(&self, p: usize) -> Result<Point3> {
        let gp = self.config.point(p);
        let f = &self.facets[p];
        let sum = f
            .boundary_vertices
            .iter()
            .filter_map(|&x| (self.vertices[x].position - gp).normalized())
            .fold(Point3::ORIGIN, |s, d| s + d);
        if let Some(dir) = sum.normalized() {
            let z = gp + dir;
            if self.strictly_inside_facet(p, z) {
                return Ok(z);
            }
        }
        let w = self.facet_witnesses[p];
        if self.strictly_inside_facet(p, w) {
            return Ok(w);
        }
        Err(Error::BarycenterFallback(p))
    }

    /// `z` on S(p) lies strictly inside every other ball.
    pub fn strictly_inside_facet(&self, p: usize, z: Point3) -> bool {
        let tol = self.config.tol;
        (0..self.config.len()).all(|g| g == p || z.dist(self.config.point(g)) < 1.0 - tol.eq_dist)
    }

    /// Combinatorial skeleton of the complex.
    pub fn to_abstract(&self) -> AbstractComplex {
        AbstractComplex {
            vertex_names: self.vertices.iter().map(|x| format!("v{}", x.id)).collect(),
            facet_names: (0..self.num_facets()).map(|p| format!("F{}", self.config.label(p))).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| AbstractEdge { vertices: e.endpoints, facets: e.generator_pair })
                .collect(),
            facet_boundaries: self.facets.iter().map(|f| f.boundary_edges.clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceRow {
    pub vertex: usize,
    pub valence: usize,
    pub distance_one_count: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceReport {
    pub rows: Vec<ValenceRow>,
}

impl ValenceReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// 2-connectivity of a multigraph given by its edge list: connected, at
/// least two vertices, no articulation point, and no bridge.
pub fn multigraph_two_connected(nv: usize, links: &[[usize; 2]]) -> bool {
    if nv < 2 {
        return false;
    }
    let mut adj = vec![Vec::new(); nv];
    for (i, l) in links.iter().enumerate() {
        if l[0] == l[1] {
            continue;
        }
        adj[l[0]].push((l[1], i));
        adj[l[1]].push((l[0], i));
    }
    let mut disc = vec![usize::MAX; nv];
    let mut low = vec![0usize; nv];
    let mut timer = 0;
    let mut ok = true;
    // iterative DFS from vertex 0
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    let mut root_children = 0;
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    while let Some(&mut (u, via, ref mut it)) = stack.last_mut() {
        if *it < adj[u].len() {
            let (w, eid) = adj[u][*it];
            *it += 1;
            if eid == via {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if u == 0 {
                    root_children += 1;
                }
                stack.push((w, eid, 0));
            } else {
                low[u] = low[u].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(parent, _, _)) = stack.last() {
                low[parent] = low[parent].min(low[u]);
                if parent != 0 && low[u] >= disc[parent] {
                    ok = false;
                }
                if low[u] > disc[parent] {
                    ok = false;
                }
            }
        }
    }
    let connected = disc.iter().all(|&d| d != usize::MAX);
    connected && ok && root_children <= 1
}
