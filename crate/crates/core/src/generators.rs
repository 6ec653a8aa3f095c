//! Families of extremal and near-extremal configurations.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::duality::canonical_duality;
use crate::error::{Error, Result};
use crate::faces::{build_face_complex, VertexKind};
use crate::geom::{ccw_delta, intersection_circle, AngularInterval, Point3, Tolerance};
use crate::vazsonyi::{check_extremal, diameter_graph};

/// Vertices of the regular tetrahedron with unit edges.
pub fn regular_tetrahedron() -> [Point3; 4] {
    let s = 1.0 / (2.0 * 2f64.sqrt());
    [Point3::new(s, s, s), Point3::new(s, -s, -s), Point3::new(-s, s, -s), Point3::new(-s, -s, s)]
}

/// Evenly spaced interior parameter of the `s`-th of `m` points.
fn spaced(s: usize, m: usize) -> f64 {
    0.05 + 0.9 * (s + 1) as f64 / (m + 1) as f64
}

fn require_count(v: &Configuration) -> Result<()> {
    let dg = diameter_graph(v)?;
    let want = 2 * v.len() - 2;
    if dg.e_count() != want {
        return Err(Error::InternalInvariantViolation(format!(
            "generated configuration has e = {} instead of {want}",
            dg.e_count()
        )));
    }
    Ok(())
}

/// Regular unit tetrahedron with `counts[[i, j]]` points on the open arc
/// A_ij: the short arc of C_kl between p_i and p_j, {k, l} the other two
/// indices.
pub fn tetrahedron_with_arc_points(counts: &BTreeMap<[usize; 2], usize>, tol: Tolerance) -> Result<Configuration> {
    let p = regular_tetrahedron();
    let mut chosen = Vec::new();
    for (&[i, j], &m) in counts {
        if i >= j || j > 3 {
            return Err(Error::InvalidArcSelection(format!("arc {i}{j} does not exist")));
        }
        if m > 0 {
            chosen.push([i, j]);
        }
    }
    for (a, s) in chosen.iter().enumerate() {
        for t in &chosen[a + 1..] {
            if !s.iter().any(|i| t.contains(i)) {
                return Err(Error::InvalidArcSelection(format!(
                    "arcs {}{} and {}{} are opposite",
                    s[0], s[1], t[0], t[1]
                )));
            }
        }
    }
    let mut points = p.to_vec();
    for &[i, j] in &chosen {
        let m = counts[&[i, j]];
        let [k, l] = (0..4).filter(|x| *x != i && *x != j).collect::<Vec<_>>()[..] else { unreachable!() };
        let circle = intersection_circle(p[k], p[l], &tol)?;
        let (ti, tj) = (circle.angle_of(p[i]), circle.angle_of(p[j]));
        let arc = if ccw_delta(ti, tj) < PI { AngularInterval::new(ti, tj) } else { AngularInterval::new(tj, ti) };
        for s in 0..m {
            points.push(circle.at(arc.start + spaced(s, m) * arc.length()));
        }
    }
    let v = Configuration::new(points, tol)?;
    require_count(&v)?;
    Ok(v)
}

/// Regular (2k−1)-gon of unit main diagonal in z = 0 with an apex at unit
/// distance from every polygon vertex.
pub fn suspended_polygon(k: usize, tol: Tolerance) -> Result<Configuration> {
    if k < 2 {
        return Err(Error::InvalidOrder(k));
    }
    let m = 2 * k - 1;
    let r = 1.0 / (2.0 * (PI / (2.0 * m as f64)).cos());
    let mut points: Vec<Point3> = (0..m)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / m as f64;
            Point3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    points.push(Point3::new(0.0, 0.0, (1.0 - r * r).sqrt()));
    Configuration::new(points, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightTag {
    Reuleaux,
}

/// Pole height of a rugby ball: explicit, or tuned so the polygon's main
/// diagonals have unit length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RugbyHeight {
    Value(f64),
    Tuned(HeightTag),
}

impl FromStr for RugbyHeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("reuleaux") {
            return Ok(RugbyHeight::Tuned(HeightTag::Reuleaux));
        }
        s.trim()
            .parse::<f64>()
            .map(RugbyHeight::Value)
            .map_err(|_| Error::InvalidSpec(format!("bad rugby height '{s}'")))
    }
}

/// Height making all main diagonals of the regular odd n-gon equal 1.
pub fn reuleaux_height(n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidOrder(n));
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParity(n));
    }
    let c = (PI / (2.0 * n as f64)).cos();
    Ok((1.0 - 1.0 / (4.0 * c * c)).sqrt())
}

/// Regular n-gon inscribed in S(p) ∩ S(q), p = (0,0,h), q = (0,0,−h);
/// the poles follow the polygon when `with_poles` is set.
pub fn rugby_ball(n: usize, height: RugbyHeight, with_poles: bool, tol: Tolerance) -> Result<Configuration> {
    if n < 3 {
        return Err(Error::InvalidOrder(n));
    }
    let h = match height {
        RugbyHeight::Value(h) => h,
        RugbyHeight::Tuned(HeightTag::Reuleaux) => reuleaux_height(n)?,
    };
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidSpec(format!("rugby height {h} outside (0, 1)")));
    }
    let r = (1.0 - h * h).sqrt();
    let mut points: Vec<Point3> = (0..n)
        .map(|i| {
            let a = 2.0 * PI * i as f64 / n as f64;
            Point3::new(r * a.cos(), r * a.sin(), 0.0)
        })
        .collect();
    if with_poles {
        points.push(Point3::new(0.0, 0.0, h));
        points.push(Point3::new(0.0, 0.0, -h));
    }
    Configuration::new(points, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPoleManifest {
    /// Marked points p_i on C_pq, in the order of the given angles.
    pub boundary_points: Vec<Point3>,
    /// Gaps i (from angle i to angle i+1) without placements; their open
    /// arcs remain in F_p ∩ F_q.
    pub surviving_orarcs: Vec<usize>,
    /// Marked points whose two adjacent gaps are both occupied.
    pub isolated_points: Vec<usize>,
    /// Labels of the points placed on each gap's dual arc.
    pub gap_labels: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPoleFamily {
    pub config: Configuration,
    pub manifest: TwoPoleManifest,
}

/// Poles p = (0,0,h), q = (0,0,−h) (labels 0, 1) plus points on the dual
/// arcs of the gaps between marked points of C_pq. Gap `i` runs from
/// `angles[i]` to `angles[i + 1]` (cyclically); `placements[i]` holds
/// parameters in (0, 1) along its dual arc from p to q.
pub fn two_pole_family(h: f64, angles: &[f64], placements: &[Vec<f64>], tol: Tolerance) -> Result<TwoPoleFamily> {
    let bad = |m: String| Err(Error::InvalidSpec(m));
    if !(h > 0.0 && h < 1.0) {
        return bad(format!("pole height {h} outside (0, 1)"));
    }
    let n = angles.len();
    if n < 2 {
        return bad("at least two marked points are needed".into());
    }
    if placements.len() != n {
        return bad(format!("{} gap placements for {n} gaps", placements.len()));
    }
    if angles.iter().any(|a| !(0.0..2.0 * PI).contains(a)) || angles.windows(2).any(|w| w[1] <= w[0]) {
        return bad("angles must increase strictly within [0, 2π)".into());
    }
    if placements.iter().flatten().any(|t| !(*t > 0.0 && *t < 1.0)) {
        return bad("placement parameters must lie in (0, 1)".into());
    }
    if placements.iter().all(Vec::is_empty) {
        return bad("no gap is occupied".into());
    }
    let p = Point3::new(0.0, 0.0, h);
    let q = Point3::new(0.0, 0.0, -h);
    let r = (1.0 - h * h).sqrt();
    let marked: Vec<Point3> = angles.iter().map(|a| Point3::new(r * a.cos(), r * a.sin(), 0.0)).collect();
    let mut points = vec![p, q];
    let mut gap_labels = Vec::with_capacity(n);
    for i in 0..n {
        let (a0, a1) = (angles[i], angles[(i + 1) % n]);
        let gap = ccw_delta(a0, a1);
        if (gap - PI).abs() < 1e-6 {
            return bad(format!("gap {i} is a half circle"));
        }
        let mut labels = Vec::new();
        if !placements[i].is_empty() {
            let (x, y) = (marked[i], marked[(i + 1) % n]);
            let circle = intersection_circle(x, y, &tol)?;
            let mid = a0 + gap / 2.0;
            let t_hat = Point3::new(mid.cos(), mid.sin(), 0.0);
            let through = circle.center - t_hat * circle.radius;
            let (tp, tq, tm) = (circle.angle_of(p), circle.angle_of(q), circle.angle_of(through));
            let arc = if ccw_delta(tp, tm) < ccw_delta(tp, tq) {
                AngularInterval::new(tp, tq)
            } else {
                AngularInterval::new(tq, tp)
            };
            let forward = arc.start == tp;
            for &t in &placements[i] {
                let s = if forward { t } else { 1.0 - t };
                labels.push(points.len());
                points.push(circle.at(arc.start + s * arc.length()));
            }
        }
        gap_labels.push(labels);
    }
    let surviving_orarcs = (0..n).filter(|&i| placements[i].is_empty()).collect();
    let isolated_points =
        (0..n).filter(|&i| !placements[i].is_empty() && !placements[(i + n - 1) % n].is_empty()).collect();
    let config = Configuration::new(points, tol)?;
    Ok(TwoPoleFamily {
        config,
        manifest: TwoPoleManifest { boundary_points: marked, surviving_orarcs, isolated_points, gap_labels },
    })
}

fn require_unit_extremal(v: &Configuration) -> Result<()> {
    let dg = diameter_graph(v)?;
    if v.len() < 4 || dg.e_count() != 2 * v.len() - 2 {
        return Err(Error::NotExtremalInput(format!("e(V) = {} for n = {}", dg.e_count(), v.len())));
    }
    if (dg.diam - 1.0).abs() > v.tol.eq_dist {
        return Err(Error::NotExtremalInput(format!("diameter {} is not 1", dg.diam)));
    }
    Ok(())
}

/// Replaces vertex `c` of B(V) by a small cap: the point p′_c just outside
/// F_c together with the crossings of S(p′_c) with the edges at `c`.
pub fn ball_truncate(v: &Configuration, c: usize, epsilon: f64, direction: Option<Point3>) -> Result<Configuration> {
    if !(epsilon > 0.0 && epsilon <= 0.1) {
        return Err(Error::InvalidSpec(format!("epsilon {epsilon} outside (0, 0.1]")));
    }
    require_unit_extremal(v)?;
    let ci = v.index_of(c).ok_or_else(|| Error::InvalidSpec(format!("no point labelled {c}")))?;
    let cp = v.point(ci);
    let fc = build_face_complex(v)?;
    let vertex = fc
        .vertices
        .iter()
        .find(|x| x.position.dist(cp) <= v.tol.vertex_merge)
        .ok_or_else(|| Error::InvalidSpec(format!("point {c} is not a vertex of B(V)")))?;
    let pc = match direction {
        Some(d) => {
            let u = (d - cp).normalized().ok_or_else(|| Error::InvalidSpec("direction coincides with c".into()))?;
            cp + u
        }
        None => fc.facet_center(ci)?,
    };
    let shifted = pc + (pc - cp) * epsilon;
    let mut extra = vec![shifted];
    for e in fc.edges.iter().filter(|e| e.endpoints.contains(&vertex.id)) {
        // parametrize from c towards the far endpoint
        let from_c = e.endpoints[0] == vertex.id;
        let at = |t: f64| e.point_at(if from_c { t } else { 1.0 - t });
        let f = |t: f64| at(t).dist(shifted) - 1.0;
        if f(0.0) <= 0.0 || f(1.0) >= 0.0 {
            return Err(Error::TruncationTooCoarse(format!("S(p'_c) does not cross edge {} once", e.id)));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        extra.push(at(0.5 * (lo + hi)));
    }
    let keep: Vec<usize> = (0..v.len()).filter(|&i| i != ci).collect();
    let w = v.subset(&keep)?.extended(&extra)?;
    match check_extremal(&w) {
        Ok(verdict) if verdict.is_extremal => Ok(w),
        Ok(_) => Err(Error::TruncationTooCoarse("result is not extremal".into())),
        Err(e @ Error::GhsCrossCheckFailure { .. }) => Err(e),
        Err(e) => Err(Error::TruncationTooCoarse(e.to_string())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DanglingChange {
    /// Label of the added point.
    pub label: usize,
    pub edge: usize,
    /// Labels of the generators at the ends of the split edge.
    pub split_edge: [usize; 2],
    /// Labels of the generators at the ends of its dual edge, which now
    /// bound the new digonal facet.
    pub dual_edge: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DanglingResult {
    pub config: Configuration,
    pub changes: Vec<DanglingChange>,
}

/// Adds points in the relative interiors of edges of B(V), never touching
/// both an edge and its dual.
pub fn add_dangling_vertices(v: &Configuration, placements: &[(usize, f64)]) -> Result<DanglingResult> {
    require_unit_extremal(v)?;
    let fc = build_face_complex(v)?;
    let phi = canonical_duality(&fc)?;
    for &(e, t) in placements {
        if e >= fc.num_edges() {
            return Err(Error::InvalidSpec(format!("no edge {e}")));
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidSpec(format!("placement parameter {t} outside (0, 1)")));
        }
    }
    for &(e, _) in placements {
        let d = phi.edge_to_edge[e];
        if placements.iter().any(|&(f, _)| f == d) {
            return Err(Error::DualEdgeConflict(e.min(d), e.max(d)));
        }
    }
    let gen_label = |vertex: usize| v.label(phi.vertex_to_facet[vertex]);
    let next = v.labels().iter().max().map_or(0, |m| m + 1);
    let mut extra = Vec::with_capacity(placements.len());
    let mut changes = Vec::with_capacity(placements.len());
    for (k, &(e, t)) in placements.iter().enumerate() {
        let edge = &fc.edges[e];
        let dual = &fc.edges[phi.edge_to_edge[e]];
        extra.push(edge.point_at(t));
        changes.push(DanglingChange {
            label: next + k,
            edge: e,
            split_edge: [gen_label(edge.endpoints[0]), gen_label(edge.endpoints[1])],
            dual_edge: [gen_label(dual.endpoints[0]), gen_label(dual.endpoints[1])],
        });
    }
    let w = v.extended(&extra)?;
    let verdict = check_extremal(&w)?;
    if !verdict.is_extremal {
        return Err(Error::InternalInvariantViolation("dangling additions broke extremality".into()));
    }
    let fc2 = build_face_complex(&w)?;
    for (x, ch) in extra.iter().zip(&changes) {
        let dangling =
            fc2.vertices.iter().any(|y| y.kind == VertexKind::Dangling && y.position.dist(*x) <= w.tol.vertex_merge);
        if !dangling {
            return Err(Error::InternalInvariantViolation(format!("point {} is not a dangling vertex", ch.label)));
        }
    }
    Ok(DanglingResult { config: w, changes })
}

/// A generator family with its parameters, as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    Tetrahedron {
        /// Arc selector "ij" (0-based, i < j) to point count.
        #[serde(default)]
        arcs: BTreeMap<String, usize>,
    },
    Suspended {
        k: usize,
    },
    Rugby {
        n: usize,
        h: RugbyHeight,
        #[serde(default)]
        poles: bool,
    },
    TwoPole {
        h: f64,
        angles: Vec<f64>,
        placements: Vec<Vec<f64>>,
    },
    Truncated {
        base: Box<GeneratorSpec>,
        vertex: usize,
        epsilon: f64,
    },
    Dangling {
        base: Box<GeneratorSpec>,
        placements: Vec<(usize, f64)>,
    },
}

/// Parses an arc selector such as "01" or "A23".
pub fn parse_arc_selector(s: &str) -> Result<[usize; 2]> {
    let digits: Vec<usize> = s
        .trim()
        .trim_start_matches(['A', 'a'])
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidArcSelection(format!("bad arc selector '{s}'")))?;
    match digits[..] {
        [i, j] if i < j && j < 4 => Ok([i, j]),
        [i, j] if j < i && i < 4 => Ok([j, i]),
        _ => Err(Error::InvalidArcSelection(format!("bad arc selector '{s}'"))),
    }
}

impl GeneratorSpec {
    pub fn build(&self, tol: Tolerance) -> Result<Configuration> {
        match self {
            GeneratorSpec::Tetrahedron { arcs } => {
                let mut counts = BTreeMap::new();
                for (key, &m) in arcs {
                    *counts.entry(parse_arc_selector(key)?).or_insert(0) += m;
                }
                tetrahedron_with_arc_points(&counts, tol)
            }
            GeneratorSpec::Suspended { k } => suspended_polygon(*k, tol),
            GeneratorSpec::Rugby { n, h, poles } => rugby_ball(*n, *h, *poles, tol),
            GeneratorSpec::TwoPole { h, angles, placements } => {
                two_pole_family(*h, angles, placements, tol).map(|f| f.config)
            }
            GeneratorSpec::Truncated { base, vertex, epsilon } => {
                ball_truncate(&base.build(tol)?, *vertex, *epsilon, None)
            }
            GeneratorSpec::Dangling { base, placements } => {
                add_dangling_vertices(&base.build(tol)?, placements).map(|r| r.config)
            }
        }
    }
}
