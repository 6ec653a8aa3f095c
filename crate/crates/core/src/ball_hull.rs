//! Ball-set membership, essential points, separation and spindles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::geom::{circle_distance_extremes, intersection_circle, Ball, Circle3, Point3, Tolerance};

/// `x` lies in the intersection of the unit balls around `V`.
pub fn in_ball_set(v: &Configuration, x: Point3) -> bool {
    v.points().iter().all(|p| p.dist(x) <= 1.0 + v.tol.eq_dist)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssentialityReport {
    pub essential: Vec<usize>,
    pub inessential: Vec<usize>,
    /// Margin-maximizing point on S(v) for each essential label.
    pub witnesses: BTreeMap<usize, Point3>,
    /// Best margin `1 − max_w ‖x − w‖` over x ∈ S(v), per label.
    pub margins: BTreeMap<usize, f64>,
    /// Labels declared essential by the two-diameter certificate.
    pub certified: Vec<usize>,
}

impl EssentialityReport {
    pub fn is_tight(&self) -> bool {
        self.inessential.is_empty()
    }
}

/// Decides essentiality of every point of `V`.
pub fn essential_points(v: &Configuration) -> Result<EssentialityReport> {
    let tol = v.tol;
    let cr = v.circumball().radius;
    if cr >= 1.0 - tol.eq_dist {
        return Err(Error::NotFullDimensional(cr));
    }
    let n = v.len();
    let diam = v.diameter();
    let unit_diam = (diam - 1.0).abs() <= tol.eq_dist;
    let band = tol.eq_dist * (1.0 + diam);
    let mut report = EssentialityReport {
        essential: Vec::new(),
        inessential: Vec::new(),
        witnesses: BTreeMap::new(),
        margins: BTreeMap::new(),
        certified: Vec::new(),
    };
    for i in 0..n {
        let label = v.label(i);
        let partners = (0..n).filter(|&j| j != i && (v.point(i).dist(v.point(j)) - diam).abs() <= band).count();
        let certified = unit_diam && partners >= 2;
        let (x, margin) = best_witness(v.points(), i);
        report.margins.insert(label, margin);
        if certified || margin > tol.eq_dist {
            if certified {
                report.certified.push(label);
            }
            report.essential.push(label);
            report.witnesses.insert(label, x);
        } else {
            report.inessential.push(label);
        }
    }
    Ok(report)
}

/// Exact maximizer of `1 − max_{w≠v} ‖x − w‖` over the unit sphere around
/// `pts[i]`, by enumerating points where one, two or three distances are
/// simultaneously active.
pub(crate) fn best_witness(pts: &[Point3], i: usize) -> (Point3, f64) {
    let c = pts[i];
    let others: Vec<Point3> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| *p).collect();
    if others.is_empty() {
        let x = c + Point3::Z;
        return (x, 1.0);
    }
    let worst = |x: Point3| others.iter().map(|w| x.dist(*w)).fold(0.0, f64::max);
    let mut best = (c + Point3::Z, f64::INFINITY);
    let mut consider = |x: Point3| {
        let f = worst(x);
        if f < best.1 {
            best = (x, f);
        }
    };
    for w in &others {
        if let Some(d) = (*w - c).normalized() {
            consider(c + d);
        }
    }
    let m = others.len();
    for a in 0..m {
        for b in a + 1..m {
            if let Some(circle) = bisector_circle(c, others[a], others[b]) {
                let tol = Tolerance::default();
                match circle_distance_extremes(&circle, others[a], &tol) {
                    Ok((tmin, _)) => consider(circle.at(tmin)),
                    Err(_) => consider(circle.at(0.0)),
                }
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            for d in b + 1..m {
                for x in equidistant_on_sphere(c, others[a], others[b], others[d]) {
                    consider(x);
                }
            }
        }
    }
    (best.0, 1.0 - best.1)
}

// S(c) ∩ bisector plane of w1, w2.
fn bisector_circle(c: Point3, w1: Point3, w2: Point3) -> Option<Circle3> {
    let n = (w2 - w1).normalized()?;
    let s = (c - w1.midpoint(w2)).dot(n);
    if s.abs() >= 1.0 {
        return None;
    }
    Some(Circle3::new(c - n * s, (1.0 - s * s).sqrt(), n))
}

// Points of S(c) equidistant from three points.
fn equidistant_on_sphere(c: Point3, a: Point3, b: Point3, d: Point3) -> Vec<Point3> {
    let n1 = b - a;
    let n2 = d - a;
    let dir = n1.cross(n2);
    let Some(dir_u) = dir.normalized() else { return Vec::new() };
    // point on the line: satisfies n1·x = n1·m1, n2·x = n2·m2, dir·x = dir·c
    let rhs = [n1.dot(a.midpoint(b)), n2.dot(a.midpoint(d)), dir.dot(c)];
    let Some(p0) = crate::geom::solve3([n1, n2, dir], rhs, 1e-14) else { return Vec::new() };
    let off = (p0 - c).norm2();
    if off > 1.0 {
        return Vec::new();
    }
    let t = (1.0 - off).sqrt();
    vec![p0 + dir_u * t, p0 - dir_u * t]
}

/// Removes every inessential point; labels of the survivors are kept.
pub fn tighten(v: &Configuration) -> Result<Configuration> {
    let report = essential_points(v)?;
    if report.inessential.is_empty() {
        return Ok(v.clone());
    }
    let keep: Vec<usize> = report.essential.iter().map(|l| v.index_of(*l).expect("own label")).collect();
    v.subset(&keep)
}

/// Unit ball containing `s` and missing `z`. Its center is the point of
/// B(s) farthest from `z`, found among the critical points of the distance
/// on the facets, edges and vertices of B(s); `z` is separable iff that
/// distance exceeds 1.
pub fn separating_ball(s: &[Point3], z: Point3, tol: &Tolerance) -> Result<Ball> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let feasible = |c: Point3| s.iter().all(|p| p.dist(c) <= 1.0 + tol.eq_dist);
    let mut best: Option<(Point3, f64)> = None;
    let mut offer = |c: Point3| {
        if feasible(c) && best.is_none_or(|(_, d)| c.dist(z) > d) {
            best = Some((c, c.dist(z)));
        }
    };
    for p in s {
        offer(*p + (*p - z).normalized().unwrap_or(Point3::Z));
    }
    let n = s.len();
    for i in 0..n {
        for j in i + 1..n {
            if let Ok(circle) = intersection_circle(s[i], s[j], tol) {
                match circle_distance_extremes(&circle, z, tol) {
                    Ok((_, tmax)) => offer(circle.at(tmax)),
                    Err(_) => offer(circle.at(0.0)),
                }
            }
            for k in j + 1..n {
                for c in unit_from_three(s[i], s[j], s[k]) {
                    offer(c);
                }
            }
        }
    }
    match best {
        Some((c, d)) if d > 1.0 + tol.eq_dist => Ok(Ball::unit(c)),
        _ => Err(Error::NotSeparable),
    }
}

// Points at distance 1 from each of `a`, `b`, `d`.
fn unit_from_three(a: Point3, b: Point3, d: Point3) -> Vec<Point3> {
    let (n1, n2) = (b - a, d - a);
    let dir = n1.cross(n2);
    let Some(dir_u) = dir.normalized() else { return Vec::new() };
    let rhs = [n1.dot(a.midpoint(b)), n2.dot(a.midpoint(d)), dir.dot(a)];
    let Some(p0) = crate::geom::solve3([n1, n2, dir], rhs, 1e-14) else { return Vec::new() };
    let off = (p0 - a).norm2();
    if off > 1.0 {
        return Vec::new();
    }
    let t = (1.0 - off).sqrt();
    vec![p0 + dir_u * t, p0 - dir_u * t]
}

/// Largest distance from `x` to a unit-ball center covering both `a` and `b`.
pub fn spindle_reach(a: Point3, b: Point3, x: Point3, tol: &Tolerance) -> f64 {
    let circle = match intersection_circle(a, b, tol) {
        Ok(c) => c,
        Err(Error::DegenerateCoincident(..)) => {
            return x.dist(a) + 1.0;
        }
        // at distance 2 the only covering ball is centered at the midpoint
        Err(_) => return x.dist(a.midpoint(b)),
    };
    let mut reach: f64 = 0.0;
    for (p, other) in [(a, b), (b, a)] {
        let far = match (p - x).normalized() {
            Some(d) => p + d,
            None => circle.at(0.0),
        };
        if far.dist(other) <= 1.0 {
            reach = reach.max(far.dist(x));
        }
    }
    let rim = match circle_distance_extremes(&circle, x, tol) {
        Ok((_, tmax)) => circle.at(tmax),
        Err(_) => circle.at(0.0),
    };
    reach.max(rim.dist(x))
}

/// `x` belongs to the spindle of `a` and `b`, i.e. to every unit ball
/// containing both.
pub fn spindle_contains(a: Point3, b: Point3, x: Point3, tol: &Tolerance) -> bool {
    let d = a.dist(b);
    if d >= 2.0 - tol.eq_dist {
        return x.dist(a.midpoint(b)) <= d / 2.0 + tol.eq_dist;
    }
    spindle_reach(a, b, x, tol) <= 1.0 + tol.eq_dist
}
