//! Parallelotope and simplex kernels: diameter diversities and negative type.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::{compare_tables, Embedding};
use crate::diversity::{
    diameter_violation, induced_metric, kernel_diversity, neg_diversity, FiniteDiversity,
};
use crate::error::{Error, Result};
use crate::geomkit::{Kernel, PointSet};

/// Fréchet embedding `y ↦ (d(x_1, y), …, d(x_n, y))` into the unit cube kernel.
pub fn diameter_embed(delta: &FiniteDiversity) -> Result<Embedding> {
    if let Some(mask) = diameter_violation(delta) {
        return Err(Error::NotDiameter {
            subset: delta.subset_labels(mask),
        });
    }
    let n = delta.len();
    if n == 0 {
        return Err(Error::Empty("ground set"));
    }
    let d = induced_metric(delta);
    let rows = (0..n).map(|y| (0..n).map(|i| d[(i, y)]).collect()).collect();
    let embedding = Embedding::from_rows(delta.labels(), rows, Kernel::unit_cube(n))?;
    embedding.verify(delta)?;
    Ok(embedding)
}

/// `δ_neg` on every subset of `points`, checked against the containment LP for
/// `−conv(0, e_1, …, e_d)` written as an H-polytope.
pub fn simplex_embed_verify(points: &PointSet) -> Result<FiniteDiversity> {
    let closed = neg_diversity(points)?;
    if points.is_empty() {
        return Ok(closed);
    }
    let body = Kernel::simplex_neg(points.dim())
        .to_hpolytope()
        .expect("simplex has an H-representation");
    let lp = kernel_diversity(points, &body)?;
    compare_tables(&closed, &lp, 0..=closed.full_mask())?;
    Ok(closed)
}

/// Ground sets above this size are rejected by [`negative_type_check`].
pub const MAX_NEGTYPE_LABELS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegTypeReport {
    pub is_negative_type: bool,
    /// Largest eigenvalue of the form restricted to zero-sum vectors.
    pub max_eigenvalue: f64,
    /// Decision threshold `1e-8 · (1 + max |M_AB|)`.
    pub threshold: f64,
    /// Zero-sum vector with a positive form value, indexed by `mask − 1`
    /// over the nonempty subsets; largest entry magnitude 1.
    pub witness: Option<Vec<f64>>,
    /// Subset keys matching the witness entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_subsets: Option<Vec<String>>,
}

/// `Σ_A Σ_B x_A x_B δ(A ∪ B)` over nonempty `A`, `B`, with `x` indexed by `mask − 1`.
pub fn quadratic_form(delta: &FiniteDiversity, x: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, xa) in x.iter().enumerate() {
        for (j, xb) in x.iter().enumerate() {
            total += xa * xb * delta.value((i + 1) | (j + 1));
        }
    }
    total
}

/// Decides whether the form `x ↦ Σ x_A x_B δ(A ∪ B)` is negative semidefinite
/// on zero-sum vectors.
pub fn negative_type_check(delta: &FiniteDiversity) -> Result<NegTypeReport> {
    let n = delta.len();
    if n > MAX_NEGTYPE_LABELS {
        return Err(Error::BudgetExceeded {
            needed: n as u128,
            budget: MAX_NEGTYPE_LABELS as u128,
        });
    }
    let size = (1usize << n) - 1;
    let m = DMatrix::from_fn(size, size, |i, j| delta.value((i + 1) | (j + 1)));
    let threshold = 1e-8 * (1.0 + m.amax());
    if size <= 1 {
        return Ok(NegTypeReport {
            is_negative_type: true,
            max_eigenvalue: 0.0,
            threshold,
            witness: None,
            witness_subsets: None,
        });
    }

    // basis e_{A_j} − e_{A_1}, orthonormalized
    let basis = DMatrix::from_fn(size, size - 1, |i, j| {
        if i == j + 1 {
            1.0
        } else if i == 0 {
            -1.0
        } else {
            0.0
        }
    });
    let q = basis.qr().q();
    let projected = q.transpose() * &m * &q;
    let projected = (&projected + projected.transpose()) * 0.5;
    let eig = SymmetricEigen::new(projected);
    let (top, max_eigenvalue) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });

    let is_negative_type = max_eigenvalue <= threshold;
    let witness = (!is_negative_type).then(|| {
        let x = &q * eig.eigenvectors.column(top);
        let norm = x.amax();
        x.iter().map(|v| v / norm).collect::<Vec<f64>>()
    });
    let witness_subsets = witness
        .as_ref()
        .map(|_| (1..=size).map(|mask| delta.subset_key(mask)).collect());
    Ok(NegTypeReport {
        is_negative_type,
        max_eigenvalue,
        threshold,
        witness,
        witness_subsets,
    })
}
