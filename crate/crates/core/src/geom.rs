//! Points, balls, circles and angular interval arithmetic.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Point3 = Point3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Point3 = Point3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Point3 = Point3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Point3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn midpoint(self, o: Point3) -> Point3 {
        (self + o) * 0.5
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Lexicographic total order, used to make algorithms permutation independent.
    pub fn lex_cmp(&self, o: &Point3) -> std::cmp::Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y)).then(self.z.total_cmp(&o.z))
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(a: [f64; 3]) -> Self {
        Point3::new(a[0], a[1], a[2])
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Point3 {
    fn add_assign(&mut self, o: Point3) {
        *self = *self + o;
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Point3 {
    type Output = Point3;
    fn div(self, s: f64) -> Point3 {
        Point3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Classification tolerances.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerance {
    /// Half-width of the band in which a distance counts as 1.
    pub eq_dist: f64,
    /// Radius within which vertex candidates are merged.
    pub vertex_merge: f64,
    /// Angular deduplication threshold (radians).
    pub angle_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eq_dist: 1e-9, vertex_merge: 1e-7, angle_eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eq_dist > 0.0
            && self.eq_dist < self.vertex_merge
            && self.vertex_merge < 1e-3
            && self.angle_eps > 0.0
            && self.angle_eps < 1e-3;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(format!(
                "need 0 < eq_dist < vertex_merge < 1e-3 and 0 < angle_eps < 1e-3, got {self:?}"
            )))
        }
    }

    /// Distance `d` counts as 1.
    pub fn is_unit(&self, d: f64) -> bool {
        (d - 1.0).abs() <= self.eq_dist
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point3,
    pub radius: f64,
}

impl Ball {
    pub fn unit(center: Point3) -> Ball {
        Ball { center, radius: 1.0 }
    }

    pub fn contains(&self, p: Point3, slack: f64) -> bool {
        self.center.dist(p) <= self.radius + slack
    }
}

/// Smallest enclosing ball, computed by move-to-front recursion on a
/// lexicographically sorted copy of the input.
pub fn circumball(points: &[Point3]) -> Result<Ball> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts = points.to_vec();
    pts.sort_by(Point3::lex_cmp);
    pts.dedup();
    let mut support = Vec::with_capacity(4);
    Ok(welzl(&pts, pts.len(), &mut support))
}

fn inside(b: &Ball, p: Point3) -> bool {
    b.center.dist(p) <= b.radius * (1.0 + 1e-12) + 1e-15
}

// Balls built from the support set only; recursion over a prefix of pts.
fn welzl(pts: &[Point3], n: usize, support: &mut Vec<Point3>) -> Ball {
    let mut ball = support_ball(support);
    if support.len() == 4 {
        return ball;
    }
    for i in 0..n {
        if !inside(&ball, pts[i]) {
            support.push(pts[i]);
            ball = welzl(pts, i, support);
            support.pop();
        }
    }
    ball
}

fn support_ball(s: &[Point3]) -> Ball {
    match s.len() {
        0 => Ball { center: Point3::ORIGIN, radius: -1.0 },
        1 => Ball { center: s[0], radius: 0.0 },
        2 => {
            let c = s[0].midpoint(s[1]);
            Ball { center: c, radius: c.dist(s[0]).max(c.dist(s[1])) }
        }
        3 => circumcircle_ball(s[0], s[1], s[2]).unwrap_or_else(|| smallest_covering_sub(s)),
        _ => circumsphere_ball(s[0], s[1], s[2], s[3]).unwrap_or_else(|| smallest_covering_sub(s)),
    }
}

fn with_radius(center: Point3, s: &[Point3]) -> Ball {
    let radius = s.iter().map(|p| center.dist(*p)).fold(0.0, f64::max);
    Ball { center, radius }
}

fn circumcircle_ball(a: Point3, b: Point3, c: Point3) -> Option<Ball> {
    let ab = b - a;
    let ac = c - a;
    let n = ab.cross(ac);
    let n2 = n.norm2();
    if n2 <= 1e-24 * ab.norm2().max(ac.norm2()).powi(2) {
        return None;
    }
    let center = a + (n.cross(ab) * ac.norm2() + ac.cross(n) * ab.norm2()) / (2.0 * n2);
    Some(with_radius(center, &[a, b, c]))
}

fn circumsphere_ball(a: Point3, b: Point3, c: Point3, d: Point3) -> Option<Ball> {
    let rows = [b - a, c - a, d - a];
    let rhs = [rows[0].norm2() / 2.0, rows[1].norm2() / 2.0, rows[2].norm2() / 2.0];
    let x = solve3(rows, rhs, 1e-14)?;
    Some(with_radius(a + x, &[a, b, c, d]))
}

// Smallest ball among those of proper subsets that still covers every point of s.
fn smallest_covering_sub(s: &[Point3]) -> Ball {
    let n = s.len();
    let mut best: Option<Ball> = None;
    for mask in 1u32..(1 << n) - 1 {
        let sub: Vec<Point3> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
        if sub.len() > 3 {
            continue;
        }
        let b = support_ball(&sub);
        if s.iter().all(|p| inside(&b, *p)) && best.is_none_or(|bb| b.radius < bb.radius) {
            best = Some(b);
        }
    }
    best.unwrap_or_else(|| {
        let c = s.iter().fold(Point3::ORIGIN, |acc, p| acc + *p) / n as f64;
        with_radius(c, s)
    })
}

/// Solves the 3x3 system with the given rows by Cramer's rule; `None` when
/// the determinant is negligible relative to the row scale.
pub(crate) fn solve3(rows: [Point3; 3], rhs: [f64; 3], rel_eps: f64) -> Option<Point3> {
    let det = rows[0].dot(rows[1].cross(rows[2]));
    let scale = rows[0].norm() * rows[1].norm() * rows[2].norm();
    if det.is_nan() || det.abs() <= rel_eps * scale {
        return None;
    }
    let c0 = rows[1].cross(rows[2]);
    let c1 = rows[2].cross(rows[0]);
    let c2 = rows[0].cross(rows[1]);
    Some((c0 * rhs[0] + c1 * rhs[1] + c2 * rhs[2]) / det)
}

/// Oriented circle with an orthonormal in-plane frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle3 {
    pub center: Point3,
    pub radius: f64,
    pub normal: Point3,
    pub frame_u: Point3,
    pub frame_w: Point3,
}

impl Circle3 {
    /// `normal` need not be unit length; it must be nonzero.
    pub fn new(center: Point3, radius: f64, normal: Point3) -> Circle3 {
        let normal = normal.normalized().expect("circle normal must be nonzero");
        let project = |a: Point3| a - normal * a.dot(normal);
        let u = project(Point3::X);
        let u = if u.norm() < 1e-6 { project(Point3::Y) } else { u };
        let frame_u = u.normalized().expect("frame axis");
        let frame_w = normal.cross(frame_u);
        Circle3 { center, radius, normal, frame_u, frame_w }
    }

    pub fn at(&self, theta: f64) -> Point3 {
        self.center + self.frame_u * (self.radius * theta.cos()) + self.frame_w * (self.radius * theta.sin())
    }

    /// Angle of the projection of `p` into the circle plane.
    pub fn angle_of(&self, p: Point3) -> f64 {
        let d = p - self.center;
        canon_angle(d.dot(self.frame_w).atan2(d.dot(self.frame_u)))
    }

    /// Arc midpoint of an interval.
    pub fn midpoint(&self, iv: &AngularInterval) -> Point3 {
        self.at(iv.midpoint())
    }
}

/// The circle of points at distance 1 from both `p` and `q`.
pub fn intersection_circle(p: Point3, q: Point3, tol: &Tolerance) -> Result<Circle3> {
    let d = p.dist(q);
    if d <= tol.eq_dist {
        return Err(Error::DegenerateCoincident(0, 1));
    }
    if d >= 2.0 - tol.eq_dist {
        return Err(Error::DegenerateEmptyOrPoint);
    }
    let radius = (1.0 - d * d / 4.0).sqrt();
    Ok(Circle3::new(p.midpoint(q), radius, q - p))
}

pub fn canon_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Counterclockwise angular distance from `a` to `b`, in [0, 2π).
pub fn ccw_delta(a: f64, b: f64) -> f64 {
    canon_angle(b - a)
}

/// Closed counterclockwise arc from `start` to `end`. A zero-length interval
/// is a point component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngularInterval {
    pub start: f64,
    pub end: f64,
}

impl AngularInterval {
    pub fn new(start: f64, end: f64) -> Self {
        AngularInterval { start: canon_angle(start), end: canon_angle(end) }
    }

    pub fn point(theta: f64) -> Self {
        let t = canon_angle(theta);
        AngularInterval { start: t, end: t }
    }

    pub fn length(&self) -> f64 {
        ccw_delta(self.start, self.end)
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    pub fn midpoint(&self) -> f64 {
        canon_angle(self.start + self.length() / 2.0)
    }

    /// Membership with angular slack on both ends.
    pub fn contains(&self, theta: f64, slack: f64) -> bool {
        let off = ccw_delta(self.start, theta);
        off <= self.length() + slack || off >= TAU - slack
    }

    /// Strictly inside, at least `margin` away from both endpoints.
    pub fn contains_interior(&self, theta: f64, margin: f64) -> bool {
        let off = ccw_delta(self.start, theta);
        off > margin && off < self.length() - margin
    }

    // Pieces on the linear range [0, 2π].
    fn linear_pieces(&self) -> Vec<(f64, f64)> {
        if self.start <= self.end {
            vec![(self.start, self.end)]
        } else {
            vec![(self.start, TAU), (0.0, self.end)]
        }
    }
}

/// Union of disjoint closed arcs on a circle, or the full circle.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct AngularIntervalSet {
    pub intervals: Vec<AngularInterval>,
    pub full_circle: bool,
}

impl AngularIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        AngularIntervalSet { intervals: Vec::new(), full_circle: true }
    }

    pub fn single(iv: AngularInterval) -> Self {
        AngularIntervalSet { intervals: vec![iv], full_circle: false }
    }

    pub fn is_empty(&self) -> bool {
        !self.full_circle && self.intervals.is_empty()
    }

    pub fn contains(&self, theta: f64, slack: f64) -> bool {
        self.full_circle || self.intervals.iter().any(|iv| iv.contains(theta, slack))
    }

    pub fn measure(&self) -> f64 {
        if self.full_circle {
            TAU
        } else {
            self.intervals.iter().map(AngularInterval::length).sum()
        }
    }

    pub fn point_components(&self) -> impl Iterator<Item = &AngularInterval> {
        self.intervals.iter().filter(|iv| iv.is_point())
    }

    /// Builds a canonical set from linear pieces on [0, 2π]: sorts, merges
    /// overlaps and gaps up to `angle_eps`, joins across 0, and collapses
    /// components shorter than `angle_eps` to points.
    pub fn from_linear_pieces(mut pieces: Vec<(f64, f64)>, angle_eps: f64) -> Self {
        pieces.retain(|(a, b)| a <= b);
        if pieces.is_empty() {
            return Self::empty();
        }
        pieces.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
        for (a, b) in pieces {
            match merged.last_mut() {
                Some(last) if a <= last.1 + angle_eps => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        let first = merged[0];
        let last = *merged.last().unwrap();
        if merged.len() == 1 && first.0 <= angle_eps && first.1 >= TAU - angle_eps {
            return Self::full();
        }
        let mut ivs: Vec<AngularInterval> = Vec::with_capacity(merged.len());
        let wraps = merged.len() > 1 && first.0 + TAU <= last.1 + angle_eps;
        let body = if wraps { &merged[1..merged.len() - 1] } else { &merged[..] };
        if wraps {
            ivs.push(AngularInterval::new(last.0, first.1));
        }
        ivs.extend(body.iter().map(|&(a, b)| AngularInterval::new(a, b)));
        for iv in ivs.iter_mut().filter(|iv| iv.length() < angle_eps) {
            *iv = AngularInterval::point(iv.midpoint());
        }
        ivs.sort_by(|a, b| a.start.total_cmp(&b.start));
        AngularIntervalSet { intervals: ivs, full_circle: false }
    }

    fn linear_pieces(&self) -> Vec<(f64, f64)> {
        if self.full_circle {
            return vec![(0.0, TAU)];
        }
        self.intervals.iter().flat_map(AngularInterval::linear_pieces).collect()
    }
}

/// Set intersection of two interval sets.
pub fn interval_set_intersect(a: &AngularIntervalSet, b: &AngularIntervalSet, tol: &Tolerance) -> AngularIntervalSet {
    if a.full_circle {
        return b.clone();
    }
    if b.full_circle {
        return a.clone();
    }
    let pa = a.linear_pieces();
    let pb = b.linear_pieces();
    let mut out = Vec::new();
    for &(s1, e1) in &pa {
        for &(s2, e2) in &pb {
            let s = s1.max(s2);
            let e = e1.min(e2);
            if s <= e {
                out.push((s, e));
            }
        }
    }
    AngularIntervalSet::from_linear_pieces(out, tol.angle_eps)
}

/// Angles θ with ‖circle(θ) − v‖ ≤ 1.
pub fn ball_arc_on_circle(circle: &Circle3, v: Point3) -> AngularIntervalSet {
    ball_arc_with_radius(circle, v, 1.0)
}

/// Angles θ with ‖circle(θ) − v‖ ≤ `radius`.
pub fn ball_arc_with_radius(circle: &Circle3, v: Point3, radius: f64) -> AngularIntervalSet {
    let d = v - circle.center;
    let r = circle.radius;
    let alpha = d.dot(circle.frame_u);
    let beta = d.dot(circle.frame_w);
    let big_d = (d.norm2() + r * r - radius * radius) / (2.0 * r);
    let rho = alpha.hypot(beta);
    if rho <= 1e-15 * (1.0 + d.norm()) {
        return if big_d <= 0.0 { AngularIntervalSet::full() } else { AngularIntervalSet::empty() };
    }
    let ratio = big_d / rho;
    if ratio > 1.0 {
        return AngularIntervalSet::empty();
    }
    if ratio <= -1.0 {
        return AngularIntervalSet::full();
    }
    let phi0 = beta.atan2(alpha);
    let delta = ratio.clamp(-1.0, 1.0).acos();
    if delta == 0.0 {
        return AngularIntervalSet::single(AngularInterval::point(phi0));
    }
    AngularIntervalSet::single(AngularInterval::new(phi0 - delta, phi0 + delta))
}

/// Angles of the nearest and farthest circle points from `v`.
pub fn circle_distance_extremes(circle: &Circle3, v: Point3, tol: &Tolerance) -> Result<(f64, f64)> {
    let d = v - circle.center;
    let alpha = d.dot(circle.frame_u);
    let beta = d.dot(circle.frame_w);
    if alpha.hypot(beta) <= tol.eq_dist {
        return Err(Error::AxisDegenerate);
    }
    let tmin = canon_angle(beta.atan2(alpha));
    Ok((tmin, canon_angle(tmin + PI)))
}

/// Whether `x − apex` lies in the convex cone spanned by `g − apex`.
pub fn spherical_hull_membership(apex: Point3, generators: &[Point3], x: Point3, tol: &Tolerance) -> Result<bool> {
    for p in generators.iter().chain(std::iter::once(&x)) {
        let d = p.dist(apex);
        if !tol.is_unit(d) {
            return Err(Error::NotOnSphere(d));
        }
    }
    let t = x - apex;
    let g: Vec<Point3> = generators.iter().map(|p| *p - apex).collect();
    let fit = 1e-9;
    // one generator
    if g.iter().any(|gi| gi.cross(t).norm() <= fit && gi.dot(t) > 0.0) {
        return Ok(true);
    }
    // two generators: least squares in their span
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let (a, b) = (g[i], g[j]);
            let (aa, ab, bb) = (a.dot(a), a.dot(b), b.dot(b));
            let det = aa * bb - ab * ab;
            if det <= 1e-14 {
                continue;
            }
            let (ta, tb) = (a.dot(t), b.dot(t));
            let la = (ta * bb - tb * ab) / det;
            let lb = (tb * aa - ta * ab) / det;
            if la >= -fit && lb >= -fit && (a * la + b * lb - t).norm() <= fit {
                return Ok(true);
            }
        }
    }
    // three independent generators
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            for k in j + 1..g.len() {
                let (a, b, c) = (g[i], g[j], g[k]);
                let det = a.dot(b.cross(c));
                if det.abs() <= 1e-12 {
                    continue;
                }
                let l = [t.dot(b.cross(c)) / det, a.dot(t.cross(c)) / det, a.dot(b.cross(t)) / det];
                if l.iter().all(|&v| v >= -fit) {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}
