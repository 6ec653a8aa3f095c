//! Point-set files, reports, OFF/OBJ meshes, DOT graphs and the small
//! text formats accepted on the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::faces::{FaceComplex, VertexKind};
use crate::geom::{Point3, Tolerance};
use crate::vazsonyi::{DiameterGraph, ExtremalityVerdict};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    points: Vec<[f64; 3]>,
    #[serde(default)]
    labels: Option<Vec<usize>>,
    #[serde(default)]
    tolerance: Tolerance,
}

#[derive(Serialize)]
struct ConfigDocOut<'a> {
    points: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<&'a [usize]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<Tolerance>,
}

fn json_error(e: serde_json::Error) -> Error {
    let text = e.to_string();
    let message = match text.rfind(" at line ") {
        Some(i) => text[..i].to_string(),
        None => text,
    };
    Error::Parse { line: e.line(), column: e.column(), message }
}

/// Decodes `{"points": [[x, y, z], ...], "tolerance": {...}}`. Labels
/// default to array indices.
pub fn parse_configuration(text: &str) -> Result<Configuration> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(json_error)?;
    let points: Vec<Point3> = doc.points.into_iter().map(Point3::from).collect();
    match doc.labels {
        Some(labels) => Configuration::with_labels(points, labels, doc.tolerance),
        None => Configuration::new(points, doc.tolerance),
    }
}

/// Reads a configuration from a file, or from stdin when `path` is `-`.
pub fn read_configuration(path: &str) -> Result<Configuration> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    parse_configuration(&text)
}

/// Encodes a configuration with shortest round-trip floats. Labels and
/// tolerance are written only when they differ from the defaults.
pub fn write_configuration(v: &Configuration) -> String {
    let default_labels = v.labels().iter().enumerate().all(|(i, &l)| i == l);
    let doc = ConfigDocOut {
        points: v.points().iter().map(|p| p.to_array()).collect(),
        labels: (!default_labels).then_some(v.labels()),
        tolerance: (v.tol != Tolerance::default()).then_some(v.tol),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("finite coordinates serialize");
    s.push('\n');
    s
}

/// Rounds to 12 significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_significant).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with sorted keys and floats at 12 significant digits.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputManifest {
    pub source: String,
    pub n: usize,
    pub tolerance: Tolerance,
    pub diameter: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCounts {
    pub vertices: usize,
    pub edges: usize,
    pub facets: usize,
    pub dangling: usize,
    pub euler: i64,
}

impl FaceCounts {
    pub fn of(fc: &FaceComplex) -> Self {
        FaceCounts {
            vertices: fc.num_vertices(),
            edges: fc.num_edges(),
            facets: fc.num_facets(),
            dangling: fc.dangling_vertices().count(),
            euler: fc.euler_characteristic(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityStatus {
    pub canonical_found: bool,
    pub cell_fixed_point_free: bool,
    pub vertex_disjoint: bool,
}

/// Machine-readable summary of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputManifest,
    pub faces: Option<FaceCounts>,
    pub extremality: Option<ExtremalityVerdict>,
    pub duality: Option<DualityStatus>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn new(source: &str, v: &Configuration) -> Self {
        RunReport {
            input: InputManifest { source: source.to_string(), n: v.len(), tolerance: v.tol, diameter: v.diameter() },
            faces: None,
            extremality: None,
            duality: None,
            warnings: Vec::new(),
        }
    }
}

/// Indexed triangle mesh.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
    /// Generator position of the facet each triangle belongs to.
    pub patch: Vec<usize>,
}

impl Mesh {
    pub fn area(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                0.5 * (b - a).cross(c - a).norm()
            })
            .sum()
    }

    /// Area with each triangle measured on the unit sphere around its
    /// patch's generator; `centers` is indexed by generator position.
    pub fn spherical_area(&self, centers: &[Point3]) -> f64 {
        self.triangles
            .iter()
            .zip(&self.patch)
            .map(|(t, &p)| {
                let [a, b, c] = t.map(|i| self.vertices[i] - centers[p]);
                let num = a.dot(b.cross(c)).abs();
                let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
                2.0 * num.atan2(den)
            })
            .sum()
    }

    /// Every directed edge occurs once and is matched by its reverse.
    pub fn is_closed(&self) -> bool {
        let mut count: BTreeMap<(usize, usize), i32> = BTreeMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                *count.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
            }
        }
        count.iter().all(|(&(a, b), &c)| c == 1 && count.get(&(b, a)) == Some(&1))
    }

    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = std::collections::BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    pub fn to_off(&self) -> String {
        let mut s = format!("OFF\n{} {} 0\n", self.vertices.len(), self.triangles.len());
        for p in &self.vertices {
            let _ = writeln!(s, "{} {} {}", p.x, p.y, p.z);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
        }
        s
    }

    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for p in &self.vertices {
            let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }
}

fn slerp(a: Point3, b: Point3, t: f64) -> Point3 {
    let cos = a.dot(b).clamp(-1.0, 1.0);
    let omega = cos.acos();
    if omega < 1e-12 {
        return b;
    }
    let s = omega.sin();
    a * (((1.0 - t) * omega).sin() / s) + b * ((t * omega).sin() / s)
}

/// Tessellates every facet by rings around its center, subdividing arcs
/// at most `arc_step_deg` degrees. Boundary polylines are computed once
/// per edge and shared by both adjacent facets.
pub fn export_mesh(fc: &FaceComplex, arc_step_deg: f64) -> Result<Mesh> {
    if !(arc_step_deg > 0.0 && arc_step_deg <= 90.0) {
        return Err(Error::InvalidSpec(format!("arc step {arc_step_deg} outside (0, 90]")));
    }
    let step = arc_step_deg.to_radians();
    let mut mesh = Mesh { vertices: fc.vertices.iter().map(|x| x.position).collect(), ..Mesh::default() };
    let polylines: Vec<Vec<usize>> = fc
        .edges
        .iter()
        .map(|e| {
            let segs = ((e.length() / step).ceil() as usize).max(1);
            let mut line = vec![e.endpoints[0]];
            for k in 1..segs {
                line.push(mesh.vertices.len());
                mesh.vertices.push(e.point_at(k as f64 / segs as f64));
            }
            line.push(e.endpoints[1]);
            line
        })
        .collect();
    for (p, facet) in fc.facets.iter().enumerate() {
        if facet.boundary_edges.is_empty() {
            continue;
        }
        let gp = fc.config.point(p);
        let mut lp: Vec<usize> = Vec::new();
        for (k, &e) in facet.boundary_edges.iter().enumerate() {
            let line = &polylines[e];
            if fc.edges[e].endpoints[0] == facet.boundary_vertices[k] {
                lp.extend(&line[..line.len() - 1]);
            } else {
                lp.extend(line.iter().rev().take(line.len() - 1));
            }
        }
        let z = fc.facet_center(p)?;
        let dz = (z - gp).normalized().ok_or(Error::BarycenterFallback(p))?;
        let dirs: Vec<Point3> = lp.iter().map(|&i| (mesh.vertices[i] - gp).normalized().unwrap_or(dz)).collect();
        let reach = dirs.iter().map(|d| dz.dot(*d).clamp(-1.0, 1.0).acos()).fold(0.0, f64::max);
        let rings = ((reach / step).ceil() as usize).max(1);
        let center = mesh.vertices.len();
        mesh.vertices.push(z);
        // grid[j][i]: ring j (1..rings-1) point towards boundary point i
        let mut grid: Vec<Vec<usize>> = vec![vec![center; lp.len()]];
        for j in 1..rings {
            let t = j as f64 / rings as f64;
            let row = dirs
                .iter()
                .map(|d| {
                    mesh.vertices.push(gp + slerp(dz, *d, t));
                    mesh.vertices.len() - 1
                })
                .collect();
            grid.push(row);
        }
        grid.push(lp.clone());
        let m = lp.len();
        for i in 0..m {
            let i1 = (i + 1) % m;
            mesh.triangles.push([center, grid[1][i], grid[1][i1]]);
            mesh.patch.push(p);
            for j in 1..rings {
                let (inner, outer) = (&grid[j], &grid[j + 1]);
                mesh.triangles.push([inner[i], outer[i], outer[i1]]);
                mesh.triangles.push([inner[i], outer[i1], inner[i1]]);
                mesh.patch.extend([p, p]);
            }
        }
    }
    Ok(mesh)
}

/// Diameter graph in DOT; nodes carry point labels.
pub fn diameter_graph_dot(dg: &DiameterGraph) -> String {
    let mut s = String::from("graph diameter {\n");
    for l in &dg.labels {
        let _ = writeln!(s, "  p{l} [label=\"{l}\"];");
    }
    for e in &dg.edges {
        let _ = writeln!(s, "  p{} -- p{};", dg.labels[e[0]], dg.labels[e[1]]);
    }
    s.push_str("}\n");
    s
}

/// 1-skeleton multigraph in DOT; edges carry their generator pair.
pub fn skeleton_dot(fc: &FaceComplex) -> String {
    let mut s = String::from("graph skeleton {\n");
    for x in &fc.vertices {
        let shape = match x.kind {
            VertexKind::Principal => "circle",
            VertexKind::Dangling => "box",
        };
        let _ = writeln!(s, "  v{} [label=\"v{}\", shape={shape}];", x.id, x.id);
    }
    for e in &fc.edges {
        let [p, q] = e.generator_pair.map(|g| fc.config.label(g));
        let _ = writeln!(s, "  v{} -- v{} [label=\"F{p}|F{q}\"];", e.endpoints[0], e.endpoints[1]);
    }
    s.push_str("}\n");
    s
}

fn flag_error(s: &str, at: &str, message: String) -> Error {
    let offset = (at.as_ptr() as usize).checked_sub(s.as_ptr() as usize).filter(|o| *o <= s.len()).unwrap_or(0);
    Error::Parse { line: 1, column: offset + 1, message }
}

// Splits on `sep`, yielding trimmed, non-empty pieces.
fn pieces(s: &str, sep: char) -> impl Iterator<Item = &str> {
    s.split(sep).map(str::trim).filter(|p| !p.is_empty())
}

fn parse_num<T: std::str::FromStr>(s: &str, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| flag_error(s, tok, format!("bad {what} '{tok}'")))
}

fn parse_finite(s: &str, tok: &str) -> Result<f64> {
    let x: f64 = parse_num(s, tok, "number")?;
    if !x.is_finite() {
        return Err(flag_error(s, tok, format!("non-finite number '{tok}'")));
    }
    Ok(x)
}

/// `eq_dist=1e-8,vertex_merge=1e-6` applied over the defaults.
pub fn parse_tolerance_overrides(s: &str) -> Result<Tolerance> {
    let mut tol = Tolerance::default();
    for item in pieces(s, ',') {
        let (key, val) =
            item.split_once('=').ok_or_else(|| flag_error(s, item, format!("expected key=value, got '{item}'")))?;
        let x = parse_finite(s, val.trim())?;
        match key.trim() {
            "eq_dist" => tol.eq_dist = x,
            "vertex_merge" => tol.vertex_merge = x,
            "angle_eps" => tol.angle_eps = x,
            other => return Err(flag_error(s, item, format!("unknown tolerance '{other}'"))),
        }
    }
    tol.validate()?;
    Ok(tol)
}

/// `01:2,02:1`: tetrahedron arc selectors with point counts.
pub fn parse_arc_counts(s: &str) -> Result<BTreeMap<[usize; 2], usize>> {
    let mut out = BTreeMap::new();
    for item in pieces(s, ',') {
        let (arc, count) =
            item.split_once(':').ok_or_else(|| flag_error(s, item, format!("expected arc:count, got '{item}'")))?;
        let key = crate::generators::parse_arc_selector(arc)?;
        let m: usize = parse_num(s, count.trim(), "count")?;
        if m > 1000 {
            return Err(flag_error(s, item, format!("count {m} too large")));
        }
        *out.entry(key).or_insert(0) += m;
    }
    Ok(out)
}

/// Comma-separated finite numbers.
pub fn parse_number_list(s: &str) -> Result<Vec<f64>> {
    pieces(s, ',').map(|tok| parse_finite(s, tok)).collect()
}

/// Gap placements: gaps separated by `;`, parameters within a gap by `,`.
/// `0.5;;0.3,0.6` occupies gaps 0 and 2 and leaves gap 1 empty.
pub fn parse_gap_placements(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';').map(|gap| pieces(gap, ',').map(|tok| parse_finite(s, tok)).collect()).collect()
}

/// Edge placements `edge:t,...`, e.g. `0:0.5,3:0.25`.
pub fn parse_edge_placements(s: &str) -> Result<Vec<(usize, f64)>> {
    pieces(s, ',')
        .map(|item| {
            let (e, t) =
                item.split_once(':').ok_or_else(|| flag_error(s, item, format!("expected edge:t, got '{item}'")))?;
            Ok((parse_num(s, e.trim(), "edge id")?, parse_finite(s, t.trim())?))
        })
        .collect()
}
