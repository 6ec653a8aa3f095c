//! Combinatorial face complexes of 3-polytope type: vertices, edges and
//! facets with their incidences, independent of any realization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractEdge {
    pub vertices: [usize; 2],
    pub facets: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbstractComplex {
    pub vertex_names: Vec<String>,
    pub facet_names: Vec<String>,
    pub edges: Vec<AbstractEdge>,
    /// Boundary edges of each facet in cyclic order.
    pub facet_boundaries: Vec<Vec<usize>>,
}

impl AbstractComplex {
    pub fn num_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_facets(&self) -> usize {
        self.facet_names.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_facets() as i64
    }

    pub fn vertex_valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| e.vertices.iter().filter(|&&x| x == v).count()).sum()
    }

    pub fn facet_size(&self, f: usize) -> usize {
        self.facet_boundaries[f].len()
    }

    /// `m[v][f]`: vertex v lies on facet f.
    pub fn vertex_facet_incidence(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.num_facets()]; self.num_vertices()];
        for e in &self.edges {
            for &v in &e.vertices {
                for &f in &e.facets {
                    m[v][f] = true;
                }
            }
        }
        m
    }

    /// Checks the two-vertex, two-facet and circuit conditions.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InternalInvariantViolation(m));
        for (i, e) in self.edges.iter().enumerate() {
            if e.vertices[0] == e.vertices[1] || e.facets[0] == e.facets[1] {
                return bad(format!("edge {i} is degenerate"));
            }
            if e.vertices.iter().any(|&v| v >= self.num_vertices()) || e.facets.iter().any(|&f| f >= self.num_facets())
            {
                return bad(format!("edge {i} references a missing face"));
            }
            for &f in &e.facets {
                if self.facet_boundaries[f].iter().filter(|&&x| x == i).count() != 1 {
                    return bad(format!("edge {i} not on the boundary of facet {f} exactly once"));
                }
            }
        }
        for (f, b) in self.facet_boundaries.iter().enumerate() {
            if b.len() < 2 {
                return bad(format!("facet {f} has fewer than two edges"));
            }
            for k in 0..b.len() {
                let (e1, e2) = (&self.edges[b[k]], &self.edges[b[(k + 1) % b.len()]]);
                if !e1.facets.contains(&f) {
                    return bad(format!("edge {} listed on facet {f} it does not bound", b[k]));
                }
                if !e1.vertices.iter().any(|v| e2.vertices.contains(v)) {
                    return bad(format!("facet {f} boundary is not a circuit"));
                }
            }
        }
        Ok(())
    }

    /// Vertices of facet `f`.
    pub fn facet_vertices(&self, f: usize) -> Vec<usize> {
        let mut vs: Vec<usize> = self.facet_boundaries[f].iter().flat_map(|&e| self.edges[e].vertices).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// An isomorphism of face posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexIsomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub facet_map: Vec<usize>,
}

/// Finds an incidence-preserving bijection between two complexes.
pub fn find_isomorphism(a: &AbstractComplex, b: &AbstractComplex) -> Option<ComplexIsomorphism> {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() || a.num_facets() != b.num_facets() {
        return None;
    }
    let ma = a.vertex_facet_incidence();
    let mb = b.vertex_facet_incidence();
    let val_a: Vec<usize> = (0..a.num_vertices()).map(|v| a.vertex_valence(v)).collect();
    let val_b: Vec<usize> = (0..b.num_vertices()).map(|v| b.vertex_valence(v)).collect();
    let mut order: Vec<usize> = (0..a.num_vertices()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(val_a[v]));
    let mut vmap = vec![usize::MAX; a.num_vertices()];
    let mut used = vec![false; b.num_vertices()];
    let mut found = None;
    assign_vertices(a, b, &ma, &mb, &val_a, &val_b, &order, 0, &mut vmap, &mut used, &mut found);
    found
}

#[allow(clippy::too_many_arguments)]
fn assign_vertices(
    a: &AbstractComplex,
    b: &AbstractComplex,
    ma: &[Vec<bool>],
    mb: &[Vec<bool>],
    val_a: &[usize],
    val_b: &[usize],
    order: &[usize],
    k: usize,
    vmap: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Option<ComplexIsomorphism>,
) {
    if found.is_some() {
        return;
    }
    if k == order.len() {
        *found = complete_facets(a, b, ma, mb, vmap);
        return;
    }
    let v = order[k];
    for w in 0..b.num_vertices() {
        if used[w] || val_b[w] != val_a[v] {
            continue;
        }
        // vertices sharing a facet must keep sharing one
        let consistent = order[..k].iter().all(|&u| {
            let share_a = (0..a.num_facets()).any(|f| ma[u][f] && ma[v][f]);
            let share_b = (0..b.num_facets()).any(|f| mb[vmap[u]][f] && mb[w][f]);
            share_a == share_b
        });
        if !consistent {
            continue;
        }
        vmap[v] = w;
        used[w] = true;
        assign_vertices(a, b, ma, mb, val_a, val_b, order, k + 1, vmap, used, found);
        used[w] = false;
        vmap[v] = usize::MAX;
        if found.is_some() {
            return;
        }
    }
}

fn complete_facets(
    a: &AbstractComplex,
    b: &AbstractComplex,
    ma: &[Vec<bool>],
    mb: &[Vec<bool>],
    vmap: &[usize],
) -> Option<ComplexIsomorphism> {
    let nf = a.num_facets();
    let mut fmap = vec![usize::MAX; nf];
    let mut used = vec![false; nf];
    let mut out = None;
    match_facets(a, b, ma, mb, vmap, 0, &mut fmap, &mut used, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn match_facets(
    a: &AbstractComplex,
    b: &AbstractComplex,
    ma: &[Vec<bool>],
    mb: &[Vec<bool>],
    vmap: &[usize],
    f: usize,
    fmap: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Option<ComplexIsomorphism>,
) {
    if out.is_some() {
        return;
    }
    if f == a.num_facets() {
        let key = |e: &AbstractEdge| {
            (sorted2([vmap[e.vertices[0]], vmap[e.vertices[1]]]), sorted2([fmap[e.facets[0]], fmap[e.facets[1]]]))
        };
        if let Some(edge_map) = match_edges(&a.edges, &b.edges, key) {
            *out = Some(ComplexIsomorphism { vertex_map: vmap.to_vec(), edge_map, facet_map: fmap.clone() });
        }
        return;
    }
    for g in 0..b.num_facets() {
        if used[g] || a.facet_size(f) != b.facet_size(g) {
            continue;
        }
        if (0..a.num_vertices()).any(|v| ma[v][f] != mb[vmap[v]][g]) {
            continue;
        }
        fmap[f] = g;
        used[g] = true;
        match_facets(a, b, ma, mb, vmap, f + 1, fmap, used, out);
        used[g] = false;
        if out.is_some() {
            return;
        }
    }
}

pub(crate) fn sorted2(x: [usize; 2]) -> [usize; 2] {
    if x[0] <= x[1] {
        x
    } else {
        [x[1], x[0]]
    }
}

/// Matches edges of `from` onto edges of `to` whose (vertex pair, facet
/// pair) equals the image key; `None` if some key has no partner left.
fn match_edges(
    from: &[AbstractEdge],
    to: &[AbstractEdge],
    key: impl Fn(&AbstractEdge) -> ([usize; 2], [usize; 2]),
) -> Option<Vec<usize>> {
    let mut used = vec![false; to.len()];
    let mut map = Vec::with_capacity(from.len());
    for e in from {
        let want = key(e);
        let hit = (0..to.len()).find(|&j| !used[j] && (sorted2(to[j].vertices), sorted2(to[j].facets)) == want)?;
        used[hit] = true;
        map.push(hit);
    }
    Some(map)
}
