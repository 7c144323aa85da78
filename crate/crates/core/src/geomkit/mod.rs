//! Points, point sets, affine maps, kernels and elementary predicates.

mod affine;
mod kernel;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

pub use affine::AffineMap;
pub use kernel::Kernel;

use crate::error::{check_dim, Error, Result};
use crate::linprog::{self, LinearProgram};
use crate::tolerance;

/// A point of `ℝ^d` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point coordinates"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point"));
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        euclidean(&self.0, &other.0)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A finite list of points of one dimension, optionally labelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointSetRepr", into = "PointSetRepr")]
pub struct PointSet {
    points: Vec<Point>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<PointSetRepr> for PointSet {
    type Error = Error;
    fn try_from(r: PointSetRepr) -> Result<Self> {
        let set = PointSet::new(r.points)?;
        match r.labels {
            Some(l) => set.with_labels(l),
            None => Ok(set),
        }
    }
}

impl From<PointSet> for PointSetRepr {
    fn from(s: PointSet) -> Self {
        Self {
            points: s.points,
            labels: s.labels,
        }
    }
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if let Some(first) = points.first() {
            let d = first.dim();
            for p in &points {
                check_dim(d, p.dim())?;
            }
        }
        Ok(Self {
            points,
            labels: None,
        })
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_coords<I, V>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<f64>>,
    {
        let points = rows
            .into_iter()
            .map(|r| Point::new(r.into()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidPointSet(format!(
                "{} labels for {} points",
                labels.len(),
                self.points.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidPointSet(format!("duplicate label {dup:?}")));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the points, `0` for an empty set.
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The label of point `i`, or `p{i}` when the set is unlabelled.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("p{i}"),
        }
    }

    pub fn all_labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    /// The points selected by `mask` (bit `i` selects point `i`).
    pub fn subset_mask(&self, mask: u64) -> PointSet {
        self.subset((0..self.len()).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn subset<I: IntoIterator<Item = usize>>(&self, idx: I) -> PointSet {
        let idx: Vec<usize> = idx.into_iter().collect();
        PointSet {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// Union of two sets of the same dimension (labels are dropped).
    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        if !self.is_empty() && !other.is_empty() {
            check_dim(self.dim(), other.dim())?;
        }
        PointSet::new(self.points.iter().chain(&other.points).cloned().collect())
    }

    /// `A + v`.
    pub fn translate(&self, v: &[f64]) -> Result<PointSet> {
        if !self.is_empty() {
            check_dim(self.dim(), v.len())?;
        }
        let points = self
            .points
            .iter()
            .map(|p| Point::new(p.0.iter().zip(v).map(|(a, b)| a + b).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet {
            points,
            labels: self.labels.clone(),
        })
    }

    /// `αA`.
    pub fn scale(&self, alpha: f64) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .map(|p| Point::new(p.0.iter().map(|a| a * alpha).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointSet {
            points,
            labels: self.labels.clone(),
        })
    }

    /// Coordinate projection onto `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> PointSet {
        PointSet {
            points: self
                .points
                .iter()
                .map(|p| Point(p.0[range.clone()].to_vec()))
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub(crate) fn coords(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.coords())
    }

    /// True when every point equals the first one.
    pub fn all_equal(&self) -> bool {
        match self.points.split_first() {
            None => true,
            Some((first, rest)) => rest.iter().all(|p| p == first),
        }
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn magnitude(&self) -> f64 {
        self.coords()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Whether `p` lies in the convex hull of `set`, decided by an LP on the
/// convex-combination weights. Returns `false` for an empty set.
pub fn in_hull(p: &Point, set: &PointSet) -> Result<bool> {
    if set.is_empty() {
        return Ok(false);
    }
    check_dim(set.dim(), p.dim())?;
    let k = set.len();
    let d = p.dim();
    // variables: weights w_0..w_{k-1}, residual t
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::minimize(objective).nonnegative();
    let mut ones = vec![1.0; k + 1];
    ones[k] = 0.0;
    lp.push_leq(ones.clone(), 1.0);
    lp.push_geq(ones, 1.0);
    for i in 0..d {
        let mut row: Vec<f64> = set.points.iter().map(|q| q[i]).collect();
        row.push(-1.0);
        lp.push_leq(row.clone(), p[i]);
        let mut neg: Vec<f64> = set.points.iter().map(|q| -q[i]).collect();
        neg.push(-1.0);
        lp.push_leq(neg, -p[i]);
    }
    let res = linprog::solve(&lp)?;
    if !res.is_optimal() {
        return Err(Error::SolverStatus(format!("hull LP ended {:?}", res.status)));
    }
    let scale = set.magnitude().max(p.coords().iter().fold(0.0f64, |m, v| m.max(v.abs())));
    Ok(res.objective_value <= tolerance::global().slack(scale))
}

/// All pairwise sums `a + b`, with exact duplicates removed (first occurrence kept).
pub fn minkowski_sum(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    if a.is_empty() || b.is_empty() {
        return PointSet::new(Vec::new());
    }
    check_dim(a.dim(), b.dim())?;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a.coords() {
        for q in b.coords() {
            let s: Vec<f64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            // +0.0 and -0.0 compare equal
            let key = s.iter().map(|v| (v + 0.0).to_bits()).collect();
            if seen.insert(key) {
                out.push(Point::new(s)?);
            }
        }
    }
    PointSet::new(out)
}

/// Pointwise image `T(A)`.
pub fn apply_map(map: &AffineMap, set: &PointSet) -> Result<PointSet> {
    let points = set
        .points
        .iter()
        .map(|p| map.apply_point(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet {
        points,
        labels: set.labels.clone(),
    })
}

/// Euclidean Hausdorff distance between two finite sets.
pub fn hausdorff(a: &PointSet, b: &PointSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("hausdorff operand"));
    }
    check_dim(a.dim(), b.dim())?;
    let directed = |x: &PointSet, y: &PointSet| {
        x.coords()
            .map(|p| {
                y.coords()
                    .map(|q| euclidean(p, q))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0f64, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_coords(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn hull_membership() {
        let square = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(in_hull(&pt(&[0.5, 0.5]), &square).unwrap());
        let segment = set(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert!(!in_hull(&pt(&[2.0, 0.0]), &segment).unwrap());
        let tri = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        assert!(in_hull(&pt(&[1.0 / 3.0, 1.0 / 3.0]), &tri).unwrap());
        assert!(!in_hull(&pt(&[0.6, 0.6]), &tri).unwrap());
        assert!(!in_hull(&pt(&[0.0, 0.0]), &PointSet::new(vec![]).unwrap()).unwrap());
        assert!(matches!(
            in_hull(&pt(&[0.0]), &tri),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn minkowski_examples() {
        let s = minkowski_sum(&set(&[&[0.0, 0.0]]), &set(&[&[1.0, 2.0]])).unwrap();
        assert_eq!(s, set(&[&[1.0, 2.0]]));
        let s = minkowski_sum(
            &set(&[&[0.0, 0.0], &[1.0, 0.0]]),
            &set(&[&[0.0, 0.0], &[0.0, 1.0]]),
        )
        .unwrap();
        assert_eq!(s, set(&[&[0.0, 0.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]]));
        let s = minkowski_sum(&set(&[&[1.0, 1.0]]), &set(&[&[-1.0, -1.0]])).unwrap();
        assert_eq!(s, set(&[&[0.0, 0.0]]));
        let dup = minkowski_sum(&set(&[&[0.0], &[1.0]]), &set(&[&[1.0], &[0.0]])).unwrap();
        assert_eq!(dup.len(), 3);
        assert!(minkowski_sum(&set(&[&[0.0]]), &set(&[&[0.0, 1.0]])).is_err());
    }

    #[test]
    fn map_examples() {
        let a = set(&[&[1.0, 0.0], &[0.3, -2.0]]);
        assert_eq!(apply_map(&AffineMap::identity(2), &a).unwrap(), a);
        let doubled = apply_map(&AffineMap::scaling(2, 2.0), &set(&[&[1.0, 0.0]])).unwrap();
        assert_eq!(doubled, set(&[&[2.0, 0.0]]));
        let rot = AffineMap::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]], vec![0.0, 0.0]).unwrap();
        assert_eq!(apply_map(&rot, &set(&[&[1.0, 0.0]])).unwrap(), set(&[&[0.0, 1.0]]));
        assert!(apply_map(&rot, &set(&[&[1.0]])).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let o = set(&[&[0.0, 0.0]]);
        assert_eq!(hausdorff(&o, &o).unwrap(), 0.0);
        assert_eq!(hausdorff(&o, &set(&[&[3.0, 4.0]])).unwrap(), 5.0);
        assert_eq!(hausdorff(&set(&[&[0.0, 0.0], &[1.0, 0.0]]), &o).unwrap(), 1.0);
        assert!(matches!(
            hausdorff(&o, &PointSet::new(vec![]).unwrap()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn labels_must_be_unique() {
        let s = set(&[&[0.0], &[1.0]]);
        assert!(s.clone().with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(s.clone().with_labels(vec!["a".into()]).is_err());
        let l = s.with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(l.label(1), "b");
    }

    #[test]
    fn json_shape() {
        let s: PointSet =
            serde_json::from_str(r#"{"points": [[0, 1], [2, 3]], "labels": ["a", "b"]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.label(0), "a");
        assert!(serde_json::from_str::<PointSet>(r#"{"points": [[0, 1], [2]]}"#).is_err());
    }
}
