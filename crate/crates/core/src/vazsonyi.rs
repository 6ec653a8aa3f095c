//! Diameter graphs, extremality, criticality and critical cores.

use serde::{Deserialize, Serialize};

use crate::ball_hull::essential_points;
use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::faces::build_face_complex;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterGraph {
    pub labels: Vec<usize>,
    /// Position pairs `i < j` realizing the diameter, sorted.
    pub edges: Vec<[usize; 2]>,
    pub diam: f64,
    /// Gap between the diameter and the largest distance outside the band.
    pub spectral_gap: f64,
}

impl DiameterGraph {
    pub fn e_count(&self) -> usize {
        self.edges.len()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.labels.len()];
        for e in &self.edges {
            val[e[0]] += 1;
            val[e[1]] += 1;
        }
        val
    }
}

pub fn diameter_graph(v: &Configuration) -> Result<DiameterGraph> {
    let n = v.len();
    if n < 2 {
        return Err(Error::InvalidSpec("diameter graph needs at least 2 points".into()));
    }
    let diam = v.diameter();
    let band = v.tol.eq_dist * (1.0 + diam);
    let mut edges = Vec::new();
    let mut next: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d = v.point(i).dist(v.point(j));
            if diam - d <= band {
                edges.push([i, j]);
            } else {
                next = next.max(d);
            }
        }
    }
    Ok(DiameterGraph { labels: v.labels().to_vec(), edges, diam, spectral_gap: diam - next })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityVerdict {
    pub n: usize,
    pub e_count: usize,
    pub bound: usize,
    pub is_extremal: bool,
    pub is_critical: bool,
    /// Criteria e(V) = 2n − 2 and (tight ∧ V = vert B(V)) agree.
    pub ghs_cross_check: bool,
    pub tight: bool,
    pub vertex_set_matches: bool,
    /// Factor applied to bring the diameter to 1.
    pub scale_factor: f64,
    pub spectral_gap: f64,
    /// Diameter-graph valence per position.
    pub valences: Vec<usize>,
}

/// Decides extremality and cross-checks it against the face structure.
pub fn check_extremal(v: &Configuration) -> Result<ExtremalityVerdict> {
    let n = v.len();
    if n < 4 {
        return Err(Error::InvalidSpec(format!("extremality needs at least 4 points, got {n}")));
    }
    let scale = 1.0 / v.diameter();
    let w = v.scaled(scale)?;
    let dg = diameter_graph(&w)?;
    let valences = dg.valences();
    let e_count = dg.e_count();
    let bound = 2 * n - 2;
    let is_extremal = e_count == bound;
    let certified = valences.iter().all(|&d| d >= 2);
    let tight = certified || essential_points(&w)?.is_tight();
    let vertex_set_matches = tight && vertex_set_is_generators(&w)?;
    let structure = tight && vertex_set_matches;
    if structure != is_extremal {
        return Err(Error::GhsCrossCheckFailure { count_says: is_extremal, structure_says: structure });
    }
    Ok(ExtremalityVerdict {
        n,
        e_count,
        bound,
        is_extremal,
        is_critical: is_extremal && valences.iter().all(|&d| d >= 3),
        ghs_cross_check: true,
        tight,
        vertex_set_matches,
        scale_factor: scale,
        spectral_gap: dg.spectral_gap,
        valences,
    })
}

// vert B(V) = V as point sets within vertex_merge.
fn vertex_set_is_generators(w: &Configuration) -> Result<bool> {
    let fc = build_face_complex(w)?;
    if fc.num_vertices() != w.len() {
        return Ok(false);
    }
    let mut hit = vec![false; w.len()];
    for x in &fc.vertices {
        match (0..w.len()).find(|&g| !hit[g] && x.position.dist(w.point(g)) <= w.tol.vertex_merge) {
            Some(g) => hit[g] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

fn require_extremal(v: &Configuration) -> Result<DiameterGraph> {
    let dg = diameter_graph(v)?;
    if v.len() < 4 || dg.e_count() != 2 * v.len() - 2 {
        return Err(Error::NotExtremalInput(format!(
            "e(V) = {} but 2n - 2 = {}",
            dg.e_count(),
            (2 * v.len()).saturating_sub(2)
        )));
    }
    Ok(dg)
}

/// Removes 2-valent points until every valence is at least 3.
pub fn critical_core(v: &Configuration) -> Result<Configuration> {
    let dg = require_extremal(v)?;
    let lowest = peel(v.len(), &dg.edges, false)?;
    let highest = peel(v.len(), &dg.edges, true)?;
    if lowest != highest {
        return Err(Error::InternalInvariantViolation(format!(
            "critical core depends on removal order: {lowest:?} vs {highest:?}"
        )));
    }
    v.subset(&lowest)
}

fn peel(n: usize, edges: &[[usize; 2]], from_top: bool) -> Result<Vec<usize>> {
    let mut alive = vec![true; n];
    loop {
        let mut val = vec![0usize; n];
        for e in edges.iter().filter(|e| alive[e[0]] && alive[e[1]]) {
            val[e[0]] += 1;
            val[e[1]] += 1;
        }
        if let Some(i) = (0..n).find(|&i| alive[i] && val[i] <= 1) {
            return Err(Error::NotExtremalInput(format!("position {i} has valence {}", val[i])));
        }
        let mut two = (0..n).filter(|&i| alive[i] && val[i] == 2);
        let pick = if from_top { two.next_back() } else { two.next() };
        match pick {
            Some(i) => alive[i] = false,
            None => break,
        }
    }
    Ok((0..n).filter(|&i| alive[i]).collect())
}

/// No diameter joins two 2-valent points.
pub fn no_adjacent_two_valent(v: &Configuration) -> Result<bool> {
    let dg = require_extremal(v)?;
    let val = dg.valences();
    Ok(dg.edges.iter().all(|e| !(val[e[0]] == 2 && val[e[1]] == 2)))
}

/// Brute-force check that no proper subset (of at least 4 points) is
/// extremal. Limited to 12 points.
pub fn is_strongly_critical(v: &Configuration) -> Result<bool> {
    let n = v.len();
    if n > 12 {
        return Err(Error::TooLarge(n));
    }
    require_extremal(v)?;
    for mask in 1u32..(1 << n) - 1 {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if members.len() < 4 {
            continue;
        }
        let sub = v.subset(&members)?;
        if diameter_graph(&sub)?.e_count() == 2 * members.len() - 2 {
            return Ok(false);
        }
    }
    Ok(true)
}
