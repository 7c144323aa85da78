use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::solve_unchecked;
use crate::error::{check_dim, Error, Result};
use crate::geomkit::{Kernel, PointSet};
use crate::DEFAULT_SEED;

/// Subsets examined by an exhaustive search before giving up.
pub const SUBSET_BUDGET: u128 = 1_000_000;

/// A subset `A' ⊆ A` with `R(A') ≤ R(A) ≤ (1+ε) R(A')`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreSetResult {
    pub subset: PointSet,
    /// Indices of the chosen points in the input, ascending.
    pub indices: Vec<usize>,
    /// `R(A, K) / R(A', K)`, `1` when both vanish.
    pub radius_ratio: f64,
    pub epsilon: f64,
    pub subset_radius: f64,
    pub full_radius: f64,
    pub size_bound: usize,
}

impl CoreSetResult {
    /// `R(A') ≤ R(A) ≤ (1+ε)R(A')` up to `slack`.
    pub fn sandwich_holds(&self, slack: f64) -> bool {
        self.subset_radius <= self.full_radius + slack
            && self.full_radius <= (1.0 + self.epsilon) * self.subset_radius + slack
    }
}

fn ceil_robust(x: f64) -> usize {
    // absorb rounding in quotients that are mathematically integral
    (x - 1e-9 * x.abs().max(1.0)).ceil().max(0.0) as usize
}

/// `⌈d/(1+ε)⌉ + 1`.
pub fn core_set_bound(dim: usize, epsilon: f64) -> usize {
    ceil_robust(dim as f64 / (1.0 + epsilon)) + 1
}

/// `⌈1/(2ε+ε²)⌉ + 1`, independent of the dimension.
pub fn ball_core_set_bound(epsilon: f64) -> usize {
    ceil_robust(1.0 / (2.0 * epsilon + epsilon * epsilon)) + 1
}

/// Exhaustive search for a core set of size `min(|A|, ⌈d/(1+ε)⌉+1)`: among all
/// subsets of that size, returns one of largest circumradius (ties broken by the
/// lexicographically smallest index list).
pub fn core_set(set: &PointSet, kernel: &Kernel, epsilon: f64) -> Result<CoreSetResult> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::PreconditionUnmet(format!("epsilon must be ≥ 0, got {epsilon}")));
    }
    let bound = core_set_bound(kernel.dim(), epsilon);
    search(set, kernel, epsilon, bound)
}

/// Core set for the Euclidean ball with the dimension-free size bound.
pub fn ball_core_set(set: &PointSet, epsilon: f64) -> Result<CoreSetResult> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::PreconditionUnmet(format!("epsilon must be > 0, got {epsilon}")));
    }
    let kernel = Kernel::ball(set.dim().max(1));
    search(set, &kernel, epsilon, ball_core_set_bound(epsilon))
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn search(set: &PointSet, kernel: &Kernel, epsilon: f64, bound: usize) -> Result<CoreSetResult> {
    if set.is_empty() {
        return Err(Error::Empty("point set"));
    }
    kernel.validate()?;
    check_dim(kernel.dim(), set.dim())?;
    let n = set.len();
    let size = bound.min(n);
    let count = binomial(n, size);
    if count > SUBSET_BUDGET {
        return Err(Error::BudgetExceeded {
            needed: count,
            budget: SUBSET_BUDGET,
        });
    }
    let full_radius = solve_unchecked(set, kernel, DEFAULT_SEED)?.radius;

    // larger radius wins, then the lexicographically smaller index list
    let pick = |a: (f64, Vec<usize>), b: (f64, Vec<usize>)| match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    };
    let best = (0..n)
        .combinations(size)
        .par_bridge()
        .map(|idx| {
            let r = solve_unchecked(&set.subset(idx.iter().copied()), kernel, DEFAULT_SEED)?;
            Ok::<_, Error>((r.radius, idx))
        })
        .try_reduce_with(|a, b| Ok(pick(a, b)))
        .ok_or(Error::Empty("subset enumeration"))??;

    let (subset_radius, indices) = best;
    let radius_ratio = if subset_radius > 0.0 {
        full_radius / subset_radius
    } else {
        1.0
    };
    Ok(CoreSetResult {
        subset: set.subset(indices.iter().copied()),
        indices,
        radius_ratio,
        epsilon,
        subset_radius,
        full_radius,
        size_bound: bound,
    })
}
