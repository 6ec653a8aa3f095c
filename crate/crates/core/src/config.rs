use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circumball, Ball, Point3, Tolerance};

/// A labeled finite point set with its classification tolerance.
///
/// Positions are indexed `0..len()`; `labels[i]` is the stable label of
/// position `i`, preserved across subsetting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration")]
pub struct Configuration {
    points: Vec<Point3>,
    labels: Vec<usize>,
    pub tol: Tolerance,
}

#[derive(Deserialize)]
struct RawConfiguration {
    points: Vec<Point3>,
    labels: Vec<usize>,
    tol: Tolerance,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = Error;

    fn try_from(raw: RawConfiguration) -> Result<Self> {
        Configuration::with_labels(raw.points, raw.labels, raw.tol)
    }
}

impl Configuration {
    /// Labels `0..n` in input order.
    pub fn new(points: Vec<Point3>, tol: Tolerance) -> Result<Self> {
        let labels = (0..points.len()).collect();
        Self::with_labels(points, labels, tol)
    }

    pub fn with_labels(points: Vec<Point3>, labels: Vec<usize>, tol: Tolerance) -> Result<Self> {
        tol.validate()?;
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if labels.len() != points.len() {
            return Err(Error::InvalidSpec("label count differs from point count".into()));
        }
        let mut seen = labels.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSpec("labels are not unique".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidSpec(format!("point {i} has a non-finite coordinate")));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].dist(points[j]) <= tol.eq_dist {
                    return Err(Error::DuplicatePoints(labels[i], labels[j]));
                }
            }
        }
        Ok(Configuration { points, labels, tol })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point3 {
        self.points[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    /// Position index of a label.
    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn circumball(&self) -> Ball {
        circumball(&self.points).expect("configuration is nonempty")
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                d = d.max(self.points[i].dist(self.points[j]));
            }
        }
        d
    }

    /// Sub-configuration at the given positions, keeping labels.
    pub fn subset(&self, positions: &[usize]) -> Result<Configuration> {
        Configuration::with_labels(
            positions.iter().map(|&i| self.points[i]).collect(),
            positions.iter().map(|&i| self.labels[i]).collect(),
            self.tol,
        )
    }

    /// Same labels, coordinates multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Configuration> {
        Configuration::with_labels(self.points.iter().map(|p| *p * s).collect(), self.labels.clone(), self.tol)
    }

    /// Appends points with fresh labels following the current maximum.
    pub fn extended(&self, extra: &[Point3]) -> Result<Configuration> {
        let next = self.labels.iter().max().map_or(0, |m| m + 1);
        let mut points = self.points.clone();
        let mut labels = self.labels.clone();
        for (k, p) in extra.iter().enumerate() {
            points.push(*p);
            labels.push(next + k);
        }
        Configuration::with_labels(points, labels, self.tol)
    }

    pub fn with_tolerance(&self, tol: Tolerance) -> Result<Configuration> {
        Configuration::with_labels(self.points.clone(), self.labels.clone(), tol)
    }
}
