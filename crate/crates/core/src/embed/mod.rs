//! Embeddability tests and constructive embeddings of finite diversities.
//!
//! An [`Embedding`] assigns a point to every label together with a kernel `K`
//! so that `δ(A) = R(φ(A), K)`. Every constructor here verifies its output on
//! all subsets (or, for the ball decision, on all subsets the decision needs)
//! before returning it.

mod ball;
mod negtype;
mod symmetric;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::diversity::{kernel_diversity, FiniteDiversity};
use crate::error::{Error, Result};
use crate::geomkit::{apply_map, AffineMap, Kernel, Point, PointSet};

pub use ball::{ball_embed_decide, BallDecision, BallReason, EIGEN_ACCEPT, EIGEN_REJECT};
pub use negtype::{
    diameter_embed, negative_type_check, quadratic_form, simplex_embed_verify, NegTypeReport,
    MAX_NEGTYPE_LABELS,
};
pub use symmetric::{
    symmetric_embed, symmetric_embeddable, three_point_embed, SymmetricCriterion,
    SymmetricWitness, MAX_EMBED_DIM,
};

/// Agreement required between an embedding and its source table.
pub const VERIFY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub assignment: IndexMap<String, Point>,
    pub kernel: Kernel,
}

impl Embedding {
    pub fn new(assignment: IndexMap<String, Point>, kernel: Kernel) -> Result<Self> {
        for p in assignment.values() {
            crate::error::check_dim(kernel.dim(), p.dim())?;
        }
        Ok(Self { assignment, kernel })
    }

    pub(crate) fn from_rows(labels: &[String], rows: Vec<Vec<f64>>, kernel: Kernel) -> Result<Self> {
        let assignment = labels
            .iter()
            .cloned()
            .zip(rows)
            .map(|(l, r)| Ok((l, Point::new(r)?)))
            .collect::<Result<IndexMap<_, _>>>()?;
        Self::new(assignment, kernel)
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// The embedded points, labelled, in the order of `labels`.
    pub fn points_for(&self, labels: &[String]) -> Result<PointSet> {
        let points = labels
            .iter()
            .map(|l| {
                self.assignment
                    .get(l)
                    .cloned()
                    .ok_or_else(|| Error::InvalidDiversity(format!("label {l:?} has no point")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(points)?.with_labels(labels.to_vec())
    }

    /// `A ↦ R(φ(A), K)` on the assigned labels.
    pub fn diversity(&self) -> Result<FiniteDiversity> {
        let labels: Vec<String> = self.assignment.keys().cloned().collect();
        kernel_diversity(&self.points_for(&labels)?, &self.kernel)
    }

    /// Checks `R(φ(A), K) = δ(A)` within [`VERIFY_TOLERANCE`] on every subset and
    /// returns the largest deviation.
    pub fn verify(&self, delta: &FiniteDiversity) -> Result<f64> {
        if self.assignment.len() != delta.len() {
            return Err(Error::LabelMismatch);
        }
        let realized = kernel_diversity(&self.points_for(delta.labels())?, &self.kernel)?;
        compare_tables(delta, &realized, 0..=delta.full_mask())
    }

    /// The embedding `T∘φ` into `T(K)`; realizes the same diversity.
    pub fn transformed(&self, map: &AffineMap) -> Result<Self> {
        let labels: Vec<String> = self.assignment.keys().cloned().collect();
        let moved = apply_map(map, &self.points_for(&labels)?)?;
        let kernel = Kernel::affine_image(map.clone(), self.kernel.clone())?;
        Self::from_rows(
            &labels,
            moved.points().iter().map(|p| p.coords().to_vec()).collect(),
            kernel,
        )
    }
}

/// Largest `|expected − got|` over `masks`, or the first (lowest) mask where it
/// exceeds [`VERIFY_TOLERANCE`].
fn compare_tables<I>(expected: &FiniteDiversity, got: &FiniteDiversity, masks: I) -> Result<f64>
where
    I: IntoIterator<Item = usize>,
{
    let mut worst = 0.0f64;
    for mask in masks {
        let (e, g) = (expected.value(mask), got.value(mask));
        if !((e - g).abs() <= VERIFY_TOLERANCE) {
            return Err(Error::VerificationFailed {
                subset: expected.subset_labels(mask),
                expected: e,
                got: g,
            });
        }
        worst = worst.max((e - g).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let e = Embedding::from_rows(
            &["a".to_string(), "b".to_string()],
            vec![vec![0.0], vec![3.0]],
            Kernel::simplex_pos(1),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        assert_eq!(v["assignment"]["b"], serde_json::json!([3.0]));
        assert_eq!(v["kernel"]["type"], "simplex_pos");
        let back: Embedding = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn verify_reports_first_mismatch() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let e = Embedding::from_rows(&labels, vec![vec![0.0], vec![3.0]], Kernel::simplex_pos(1)).unwrap();
        let delta = FiniteDiversity::constant(labels, 3.0).unwrap();
        assert!(e.verify(&delta).unwrap() < 1e-12);
        let off = delta.with_value(0b11, 2.0).unwrap();
        assert!(matches!(e.verify(&off), Err(Error::VerificationFailed { .. })));
    }

    #[test]
    fn transformed_keeps_values() {
        let labels: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let e = Embedding::from_rows(
            &labels,
            vec![vec![0.0, 0.0], vec![1.0, 0.3], vec![0.2, 0.9]],
            Kernel::simplex_neg(2),
        )
        .unwrap();
        let map = AffineMap::from_rows(&[vec![2.0, 1.0], vec![-0.5, 1.5]], vec![3.0, -1.0]).unwrap();
        let moved = e.transformed(&map).unwrap();
        let diff = e.diversity().unwrap().max_abs_diff(&moved.diversity().unwrap()).unwrap();
        assert!(diff < 1e-9, "{diff}");
    }
}
