//! Deciding embeddability into `(ℝ^d, R(·, 𝔅))` for the Euclidean unit ball.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use super::{Embedding, VERIFY_TOLERANCE};
use crate::circumradius::min_enclosing_ball;
use crate::diversity::{induced_metric, FiniteDiversity};
use crate::error::{Error, Result};
use crate::geomkit::Kernel;
use crate::DEFAULT_SEED;

/// Gram eigenvalues below `EIGEN_ACCEPT · trace` count as zero without comment.
pub const EIGEN_ACCEPT: f64 = 1e-10;
/// Gram eigenvalues above `EIGEN_REJECT · trace` count toward the rank.
pub const EIGEN_REJECT: f64 = 1e-6;
/// Gram eigenvalues below `−NEGATIVE_EIGEN · trace` make the metric non-Euclidean.
const NEGATIVE_EIGEN: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum BallReason {
    Ok,
    MetricNotEuclidean { min_eigenvalue: f64 },
    RankExceedsD { rank: usize, d: usize },
    /// `expected` is the radius of the embedded subset, `got` the table value.
    SubsetMismatch { subset: Vec<String>, expected: f64, got: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallDecision {
    pub embeddable: bool,
    pub reason: BallReason,
    pub embedding: Option<Embedding>,
    pub warnings: Vec<String>,
}

impl BallDecision {
    fn reject(reason: BallReason, warnings: Vec<String>) -> Self {
        Self {
            embeddable: false,
            reason,
            embedding: None,
            warnings,
        }
    }
}

/// Decides whether `δ` embeds into the ball diversity of `ℝ^d`.
///
/// Requires `δ(A) = max{δ(A') : A' ⊆ A, |A'| ≤ d+1}`. The induced metric,
/// doubled (a pair `{x, y}` has ball radius `‖x − y‖/2`), is embedded by
/// classical scaling anchored at the lexicographically smallest label; the
/// embedding is then compared with `δ` on every subset of at most `d+1` labels.
pub fn ball_embed_decide(delta: &FiniteDiversity, d: usize) -> Result<BallDecision> {
    if d == 0 {
        return Err(Error::PreconditionUnmet("dimension must be positive".into()));
    }
    check_core_property(delta, d)?;
    let n = delta.len();
    let mut warnings = Vec::new();
    if n == 0 {
        return Err(Error::Empty("ground set"));
    }

    let metric = induced_metric(delta) * 2.0;
    let anchor = (0..n).min_by(|&a, &b| delta.labels()[a].cmp(&delta.labels()[b])).unwrap();
    let sq = |i: usize, j: usize| metric[(i, j)] * metric[(i, j)];
    let gram = DMatrix::from_fn(n, n, |i, j| (sq(anchor, i) + sq(anchor, j) - sq(i, j)) / 2.0);
    let trace = gram.trace();
    let eig = SymmetricEigen::new(gram);

    let scale = trace.max(0.0);
    let min_eigenvalue = eig.eigenvalues.min();
    if min_eigenvalue < -NEGATIVE_EIGEN * scale {
        return Ok(BallDecision::reject(
            BallReason::MetricNotEuclidean { min_eigenvalue },
            warnings,
        ));
    }
    let mut kept: Vec<usize> = Vec::new();
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v > EIGEN_REJECT * scale {
            kept.push(i);
        } else if v > EIGEN_ACCEPT * scale {
            warnings.push(format!(
                "ambiguous numerical rank: eigenvalue {v:e} lies between {EIGEN_ACCEPT:e} and {EIGEN_REJECT:e} times the trace; treated as zero"
            ));
        }
    }
    if kept.len() > d {
        return Ok(BallDecision::reject(
            BallReason::RankExceedsD { rank: kept.len(), d },
            warnings,
        ));
    }
    // largest eigenvalues first, for a stable coordinate order
    kept.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| {
            let mut p = vec![0.0; d];
            for (c, &k) in kept.iter().enumerate() {
                p[c] = eig.eigenvectors[(x, k)] * eig.eigenvalues[k].sqrt();
            }
            p
        })
        .collect();

    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    let mismatch = (1..=delta.full_mask())
        .into_par_iter()
        .filter(|m| (2..=d + 1).contains(&(m.count_ones() as usize)))
        .map(|mask| {
            let members: Vec<&[f64]> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| refs[i]).collect();
            (mask, min_enclosing_ball(&members, d, DEFAULT_SEED).radius)
        })
        .find_first(|&(mask, r)| !((r - delta.value(mask)).abs() <= VERIFY_TOLERANCE));
    if let Some((mask, radius)) = mismatch {
        return Ok(BallDecision::reject(
            BallReason::SubsetMismatch {
                subset: delta.subset_labels(mask),
                expected: radius,
                got: delta.value(mask),
            },
            warnings,
        ));
    }
    let embedding = Embedding::from_rows(delta.labels(), rows, Kernel::ball(d))?;
    Ok(BallDecision {
        embeddable: true,
        reason: BallReason::Ok,
        embedding: Some(embedding),
        warnings,
    })
}

/// `δ(A) = max_{a ∈ A} δ(A ∖ {a})` whenever `|A| > d + 1`.
fn check_core_property(delta: &FiniteDiversity, d: usize) -> Result<()> {
    let n = delta.len();
    let bad = (1..=delta.full_mask())
        .into_par_iter()
        .filter(|m| m.count_ones() as usize > d + 1)
        .find_first(|&mask| {
            let best = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| delta.value(mask & !(1 << i)))
                .fold(0.0f64, f64::max);
            !((delta.value(mask) - best).abs() <= VERIFY_TOLERANCE)
        });
    match bad {
        None => Ok(()),
        Some(mask) => Err(Error::PreconditionUnmet(format!(
            "δ({}) is not the maximum over its subsets of size at most {}",
            delta.subset_key(mask),
            d + 1
        ))),
    }
}
