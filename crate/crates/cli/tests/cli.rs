use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use ballpoly::generators::regular_tetrahedron;
use ballpoly::geom::intersection_circle;
use ballpoly::io::write_configuration;
use ballpoly::{Configuration, Error, Tolerance};
use serde_json::Value;

fn ballpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballpoly")).args(args).output().unwrap()
}

fn ballpoly_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ballpoly"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn ok_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend(["--out", &path]);
    let out = ballpoly(&full);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn generated_pentagon_is_extremal() {
    let gen = ballpoly(&["generate", "suspended", "--k", "3"]);
    assert!(gen.status.success());
    let rep = ok_json(&ballpoly_stdin(&["check-extremal", "-"], &gen.stdout));
    assert_eq!(rep["extremality"]["e_count"], 10);
    assert_eq!(rep["extremality"]["is_extremal"], true);
    assert_eq!(rep["input"]["n"], 6);
}

#[test]
fn prism_dualities() {
    let rep = ok_json(&ballpoly(&["prism-dualities", "--n", "5"]));
    assert_eq!((rep["total"].as_u64(), rep["fixed_point_free"].as_u64()), (Some(6), Some(1)));
    let rep = ok_json(&ballpoly(&["prism-dualities", "--n", "4"]));
    assert_eq!((rep["total"].as_u64(), rep["fixed_point_free"].as_u64()), (Some(4), Some(0)));
    assert_eq!(ballpoly(&["prism-dualities", "--n", "2"]).status.code(), Some(1));
}

#[test]
fn faces_writes_every_export() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), "rugby.json", &["rugby", "--n", "3", "--h", "0.5"]);
    let path = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    let (report, mesh, obj, skeleton) = (path("r.json"), path("m.off"), path("m.obj"), path("s.dot"));
    let out =
        ballpoly(&["faces", &input, "--report", &report, "--mesh", &mesh, "--obj", &obj, "--skeleton", &skeleton]);
    let rep = ok_json(&out);
    let faces = &rep["faces"];
    assert_eq!(
        (faces["vertices"].as_u64(), faces["edges"].as_u64(), faces["facets"].as_u64()),
        (Some(2), Some(3), Some(3))
    );
    assert_eq!(faces["euler"], 2);
    assert_eq!(std::fs::read(&report).unwrap(), out.stdout);
    assert!(std::fs::read_to_string(&mesh).unwrap().starts_with("OFF\n"));
    assert!(std::fs::read_to_string(&obj).unwrap().lines().any(|l| l.starts_with("f ")));
    let dot = std::fs::read_to_string(&skeleton).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 3);
    // reruns are byte-identical
    assert_eq!(ballpoly(&["faces", &input]).stdout, ballpoly(&["faces", &input]).stdout);
}

#[test]
fn diameter_graph_dot() {
    let dir = tempfile::tempdir().unwrap();
    let input = generate(dir.path(), "tet.json", &["tetrahedron", "--arcs", "01:1"]);
    let dot = dir.path().join("d.dot");
    let rep = ok_json(&ballpoly(&["diameter-graph", &input, "--dot", dot.to_str().unwrap()]));
    assert_eq!(rep["e_count"], 8);
    assert_eq!(rep["valences"][4], 2);
    let text = std::fs::read_to_string(dot).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), 8);
}

#[test]
fn duality_and_critical_core() {
    let dir = tempfile::tempdir().unwrap();
    let pent = generate(dir.path(), "pent.json", &["suspended", "--k", "3"]);
    let report = dir.path().join("dual.json");
    let rep = ok_json(&ballpoly(&["duality", &pent, "--report", report.to_str().unwrap()]));
    assert_eq!(rep["status"]["cell_fixed_point_free"], true);
    assert_eq!(rep["duality"]["vertex_to_facet"].as_array().unwrap().len(), 6);
    assert!(report.exists());

    let arcs = generate(dir.path(), "arcs.json", &["tetrahedron", "--arcs", "01:2,02:1"]);
    let core = dir.path().join("core.json");
    let out = ballpoly(&["critical-core", &arcs, "--out", core.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(core).unwrap()).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 4);

    let rugby = generate(dir.path(), "rugby.json", &["rugby", "--n", "5", "--h", "0.5"]);
    assert_eq!(ballpoly(&["duality", &rugby]).status.code(), Some(1));
}

#[test]
fn generator_families() {
    let dir = tempfile::tempdir().unwrap();
    let pent = generate(dir.path(), "pent.json", &["suspended", "--k", "3"]);
    let count = |path: &str| {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        v["points"].as_array().unwrap().len()
    };
    assert_eq!(count(&generate(dir.path(), "tr.json", &["truncate", &pent, "--vertex", "5"])), 11);
    assert_eq!(count(&generate(dir.path(), "dg.json", &["dangling", &pent, "--placements", "0:0.5"])), 7);
    assert_eq!(count(&generate(dir.path(), "rg.json", &["rugby", "--n", "5", "--h", "reuleaux", "--poles"])), 7);
    let tp = generate(
        dir.path(),
        "tp.json",
        &["two-pole", "--h", "0.6", "--angles", "0.3,1.6,2.9,4.4", "--gaps", "0.5;;0.4;"],
    );
    assert_eq!(count(&tp), 4);
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"family":"truncated","base":{"family":"suspended","k":3},"vertex":5,"epsilon":0.05}"#)
        .unwrap();
    assert_eq!(count(&generate(dir.path(), "sp.json", &["spec", spec.to_str().unwrap()])), 11);
    assert_eq!(ballpoly(&["generate", "tetrahedron", "--arcs", "01:1,23:1"]).status.code(), Some(1));
    assert_eq!(ballpoly(&["generate", "rugby", "--n", "4", "--h", "reuleaux"]).status.code(), Some(1));
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("nan.json");
    std::fs::write(&bad, "{\"points\": [[0, 0, 0],\n  [NaN, 1, 0]]}").unwrap();
    let out = ballpoly(&["faces", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(ballpoly(&["faces", "/nonexistent/points.json"]).status.code(), Some(1));
    assert_eq!(ballpoly_stdin(&["check-extremal", "-"], b"{\"points\": []}").status.code(), Some(1));
}

#[test]
fn tolerance_flag() {
    let gen = ballpoly(&["generate", "suspended", "--k", "3"]);
    let out = ballpoly_stdin(&["check-extremal", "-", "--tolerance", "eq_dist=1e-7"], &gen.stdout);
    assert_eq!(out.status.code(), Some(1));
    let rep = ok_json(&ballpoly_stdin(
        &["check-extremal", "-", "--tolerance", "eq_dist=1e-8,vertex_merge=1e-6"],
        &gen.stdout,
    ));
    assert_eq!(rep["input"]["tolerance"]["eq_dist"], 1e-8);
    assert_eq!(rep["input"]["tolerance"]["vertex_merge"], 1e-6);
}

#[test]
fn verify_flag_runs_the_invariant_suite() {
    let gen = ballpoly(&["generate", "suspended", "--k", "4"]);
    let out = ballpoly_stdin(&["faces", "-", "--verify", "--seed", "7"], &gen.stdout);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("verification passed"));
}

#[test]
fn ambiguous_vertex_exits_three() {
    // a point on the arc of C_23 just off p0: within vertex_merge of a
    // principal vertex yet on only two spheres
    let p = regular_tetrahedron();
    let t = Tolerance::default();
    let c = intersection_circle(p[2], p[3], &t).unwrap();
    let th0 = c.angle_of(p[0]);
    let th1 = c.angle_of(p[1]);
    let toward = if ballpoly::geom::ccw_delta(th0, th1) < std::f64::consts::PI { 1.0 } else { -1.0 };
    let x = c.at(th0 + toward * 2e-8 / c.radius);
    let mut pts = p.to_vec();
    pts.push(x);
    let v = Configuration::new(pts, t).unwrap();
    let out = ballpoly_stdin(&["faces", "-"], write_configuration(&v).as_bytes());
    assert_eq!(out.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_codes_follow_error_kinds() {
    assert_eq!(Error::GhsCrossCheckFailure { count_says: true, structure_says: false }.exit_code(), 2);
    assert_eq!(Error::DualityFailure("x".into()).exit_code(), 2);
    assert_eq!(Error::InternalInvariantViolation("x".into()).exit_code(), 2);
    assert_eq!(Error::ToleranceConflict("x".into()).exit_code(), 3);
    assert_eq!(Error::NonGenericUnsupported("x".into()).exit_code(), 3);
    assert_eq!(Error::EmptyInput.exit_code(), 1);
}
