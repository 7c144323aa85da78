//! Finite diversities on labelled ground sets.
//!
//! A [`FiniteDiversity`] stores one value per subset of at most
//! [`MAX_LABELS`] labels, indexed by bitmask (bit `i` selects `labels[i]`).
//! Empty and singleton subsets always carry `0`, so every table is at least a
//! candidate semidiversity; [`check_axioms`] decides the rest.

mod axioms;
mod json;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::circumradius::{simplex_neg_closed_form, solve_unchecked};
use crate::error::{check_dim, Error, Result};
use crate::geomkit::{Kernel, PointSet};
use crate::tolerance;
use crate::DEFAULT_SEED;

pub use axioms::{check_axioms, check_axioms_with, AxiomReport, CheckMode, Violation};

/// Largest supported ground set.
pub const MAX_LABELS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDiversity {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl FiniteDiversity {
    /// Table from explicit values, `values[mask]` for every mask below `2^n`.
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        check_labels(&labels)?;
        let n = labels.len();
        if values.len() != 1 << n {
            return Err(Error::InvalidDiversity(format!(
                "expected {} values for {n} labels, got {}",
                1usize << n,
                values.len()
            )));
        }
        for (mask, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite("diversity value"));
            }
            if v < 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "negative value {v} on {:?}",
                    subset_labels(&labels, mask)
                )));
            }
            if mask.count_ones() <= 1 && v != 0.0 {
                return Err(Error::InvalidDiversity(format!(
                    "value {v} on {:?}; sets of size at most one must have value 0",
                    subset_labels(&labels, mask)
                )));
            }
        }
        Ok(Self { labels, values })
    }

    /// Table with `δ(A) = f(mask)` for `|A| ≥ 2`, evaluated in parallel.
    pub fn from_fn<F>(labels: Vec<String>, f: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<f64> + Sync,
    {
        check_labels(&labels)?;
        let values = (0..1usize << labels.len())
            .into_par_iter()
            .map(|mask| if mask.count_ones() <= 1 { Ok(0.0) } else { f(mask) })
            .collect::<Result<Vec<f64>>>()?;
        Self::new(labels, values)
    }

    /// Symmetric table `δ(A) = profile[|A| - 1]`; `profile[0]` must be `0`.
    pub fn from_profile(labels: Vec<String>, profile: &[f64]) -> Result<Self> {
        if profile.len() != labels.len() {
            return Err(Error::InvalidDiversity(format!(
                "profile has {} entries for {} labels",
                profile.len(),
                labels.len()
            )));
        }
        if profile.first().is_some_and(|&v| v != 0.0) {
            return Err(Error::InvalidDiversity("profile[0] must be 0".into()));
        }
        Self::from_fn(labels, |mask| Ok(profile[mask.count_ones() as usize - 1]))
    }

    /// `δ(A) = |A| − 1`.
    pub fn count(labels: Vec<String>) -> Result<Self> {
        Self::from_fn(labels, |mask| Ok(mask.count_ones() as f64 - 1.0))
    }

    /// `δ(A) = c` for every `|A| ≥ 2`.
    pub fn constant(labels: Vec<String>, c: f64) -> Result<Self> {
        Self::from_fn(labels, |_| Ok(c))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// All values, indexed by subset mask.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, mask: usize) -> f64 {
        self.values[mask]
    }

    pub fn full_mask(&self) -> usize {
        (1 << self.len()) - 1
    }

    /// Value on the subset with the given labels.
    pub fn value_of<S: AsRef<str>>(&self, subset: &[S]) -> Result<f64> {
        Ok(self.values[self.mask_of(subset)?])
    }

    pub fn mask_of<S: AsRef<str>>(&self, subset: &[S]) -> Result<usize> {
        subset.iter().try_fold(0usize, |mask, s| {
            let s = s.as_ref();
            self.labels
                .iter()
                .position(|l| l == s)
                .map(|i| mask | 1 << i)
                .ok_or_else(|| Error::InvalidDiversity(format!("unknown label {s:?}")))
        })
    }

    /// Labels of the subset `mask`, in label order.
    pub fn subset_labels(&self, mask: usize) -> Vec<String> {
        subset_labels(&self.labels, mask)
    }

    /// Largest absolute value in the table.
    pub fn magnitude(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Copy with one entry replaced; fails if the new table is not well formed.
    pub fn with_value(&self, mask: usize, value: f64) -> Result<Self> {
        let mut values = self.values.clone();
        values[mask] = value;
        Self::new(self.labels.clone(), values)
    }

    /// Largest entrywise difference to another table on the same labels.
    pub fn max_abs_diff(&self, other: &FiniteDiversity) -> Result<f64> {
        same_labels(self, other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

pub(crate) fn subset_labels(labels: &[String], mask: usize) -> Vec<String> {
    labels
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, l)| l.clone())
        .collect()
}

fn check_labels(labels: &[String]) -> Result<()> {
    if labels.len() > MAX_LABELS {
        return Err(Error::InvalidDiversity(format!(
            "{} labels exceed the limit of {MAX_LABELS}",
            labels.len()
        )));
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.contains(',') {
            return Err(Error::InvalidDiversity(format!(
                "label {l:?} must be nonempty and contain no comma"
            )));
        }
        if labels[..i].contains(l) {
            return Err(Error::InvalidDiversity(format!("duplicate label {l:?}")));
        }
    }
    Ok(())
}

fn same_labels(a: &FiniteDiversity, b: &FiniteDiversity) -> Result<()> {
    if a.labels == b.labels {
        Ok(())
    } else {
        Err(Error::LabelMismatch)
    }
}

/// `d(x, y) = δ({x, y})`.
pub fn induced_metric(delta: &FiniteDiversity) -> DMatrix<f64> {
    let n = delta.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            delta.value(1 << i | 1 << j)
        }
    })
}

/// Diameter diversity of a semimetric: `δ(A) = max_{a, a' ∈ A} d(a, a')`.
pub fn diameter_diversity(metric: &DMatrix<f64>, labels: Vec<String>) -> Result<FiniteDiversity> {
    let n = metric.nrows();
    if metric.ncols() != n {
        return Err(Error::NotSemimetric(format!(
            "matrix is {}×{}",
            n,
            metric.ncols()
        )));
    }
    if labels.len() != n {
        return Err(Error::NotSemimetric(format!(
            "{} labels for a {n}×{n} matrix",
            labels.len()
        )));
    }
    let tol = tolerance::global();
    let scale = metric.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slack = tol.slack(scale);
    for i in 0..n {
        if metric[(i, i)].abs() > slack {
            return Err(Error::NotSemimetric(format!("d({i},{i}) = {}", metric[(i, i)])));
        }
        for j in 0..n {
            let v = metric[(i, j)];
            if !v.is_finite() {
                return Err(Error::NonFinite("metric"));
            }
            if v < -slack {
                return Err(Error::NotSemimetric(format!("d({i},{j}) = {v} < 0")));
            }
            if (v - metric[(j, i)]).abs() > slack {
                return Err(Error::NotSemimetric(format!("d({i},{j}) ≠ d({j},{i})")));
            }
            for k in 0..n {
                if v > metric[(i, k)] + metric[(k, j)] + slack {
                    return Err(Error::NotSemimetric(format!(
                        "triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})"
                    )));
                }
            }
        }
    }
    FiniteDiversity::from_fn(labels, |mask| {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut best = 0.0f64;
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                best = best.max(metric[(i, j)].max(0.0));
            }
        }
        Ok(best)
    })
}

/// Whether `δ(A)` equals the largest pairwise value in `A` for every `A`.
pub fn is_diameter(delta: &FiniteDiversity) -> bool {
    diameter_violation(delta).is_none()
}

/// First subset (by mask) on which `δ` differs from its diameter.
pub(crate) fn diameter_violation(delta: &FiniteDiversity) -> Option<usize> {
    let d = induced_metric(delta);
    let tol = tolerance::global();
    let n = delta.len();
    (0..=delta.full_mask()).find(|&mask| {
        let mut best = 0.0f64;
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            for j in (i + 1..n).filter(|j| mask >> j & 1 == 1) {
                best = best.max(d[(i, j)]);
            }
        }
        !tol.eq(best, delta.value(mask))
    })
}

fn labelled_subset(points: &PointSet, mask: usize) -> PointSet {
    points.subset_mask(mask as u64)
}

fn point_labels(points: &PointSet) -> Vec<String> {
    points.all_labels()
}

/// `δ₁(A) = Σᵢ (max_a aᵢ − min_a aᵢ)` on every subset of `points`.
pub fn l1_diversity(points: &PointSet) -> Result<FiniteDiversity> {
    FiniteDiversity::from_fn(point_labels(points), |mask| {
        Ok(l1_value(&labelled_subset(points, mask)))
    })
}

fn l1_value(set: &PointSet) -> f64 {
    (0..set.dim())
        .map(|i| {
            let (lo, hi) = set.coords().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[i]), hi.max(p[i]))
            });
            hi - lo
        })
        .sum()
}

/// `δ_neg(A) = Σᵢ max_a aᵢ − min_a Σᵢ aᵢ` on every subset of `points`.
pub fn neg_diversity(points: &PointSet) -> Result<FiniteDiversity> {
    FiniteDiversity::from_fn(point_labels(points), |mask| {
        Ok(simplex_neg_closed_form(&labelled_subset(points, mask)).1)
    })
}

/// `δ(A) = R(A, K)` on every subset of `points`.
pub fn kernel_diversity(points: &PointSet, kernel: &Kernel) -> Result<FiniteDiversity> {
    kernel.validate()?;
    if !points.is_empty() {
        check_dim(kernel.dim(), points.dim())?;
    }
    FiniteDiversity::from_fn(point_labels(points), |mask| {
        Ok(solve_unchecked(&labelled_subset(points, mask), kernel, DEFAULT_SEED)?.radius)
    })
}

/// `δ(A) = oracle(A)` on every subset of `points`.
pub fn oracle_diversity<O: DiversityOracle + ?Sized>(
    points: &PointSet,
    oracle: &O,
) -> Result<FiniteDiversity> {
    FiniteDiversity::from_fn(point_labels(points), |mask| {
        oracle.evaluate(&labelled_subset(points, mask))
    })
}

/// Pointwise maximum `δ₁ ∨ δ₂`.
pub fn max_combine(a: &FiniteDiversity, b: &FiniteDiversity) -> Result<FiniteDiversity> {
    same_labels(a, b)?;
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x.max(*y)).collect();
    FiniteDiversity::new(a.labels.clone(), values)
}

/// `λδ` for `λ > 0`.
pub fn scale(lambda: f64, delta: &FiniteDiversity) -> Result<FiniteDiversity> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::PreconditionUnmet(format!(
            "scale factor must be positive and finite, got {lambda}"
        )));
    }
    let values = delta.values.iter().map(|v| lambda * v).collect();
    FiniteDiversity::new(delta.labels.clone(), values)
}

/// Cardinality profile of a symmetric diversity: `δ(A) = f[|A| − 1]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymmetricProfile {
    pub f: Vec<f64>,
}

impl SymmetricProfile {
    /// Whether `f` is non-decreasing.
    pub fn is_increasing(&self) -> bool {
        self.f.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Tolerance for comparing equal-size subsets.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Profile of `δ` when its value depends only on subset size.
pub fn symmetric_profile(delta: &FiniteDiversity) -> Result<SymmetricProfile> {
    let n = delta.len();
    // representative of each size: the smallest mask with that many bits
    let reps: Vec<usize> = (1..=n).map(|k| (1usize << k) - 1).collect();
    let slack = SYMMETRY_TOLERANCE * (1.0 + delta.magnitude());
    for mask in 1..=delta.full_mask() {
        let rep = reps[mask.count_ones() as usize - 1];
        if (delta.value(mask) - delta.value(rep)).abs() > slack {
            return Err(Error::NotSymmetric {
                first: delta.subset_labels(rep),
                second: delta.subset_labels(mask),
            });
        }
    }
    Ok(SymmetricProfile {
        f: reps.iter().map(|&m| delta.value(m)).collect(),
    })
}

/// A diversity on all finite subsets of `ℝ^d`, given as a function.
pub trait DiversityOracle: Sync {
    fn evaluate(&self, set: &PointSet) -> Result<f64>;

    /// True when `δ(A)` is a sum of per-coordinate terms each depending only
    /// on the coordinate's range, so coordinate-wise minimization is exact.
    fn coordinate_separable(&self) -> bool {
        false
    }
}

impl<F> DiversityOracle for F
where
    F: Fn(&PointSet) -> Result<f64> + Sync,
{
    fn evaluate(&self, set: &PointSet) -> Result<f64> {
        self(set)
    }
}

/// The `L1` diversity `δ₁`.
#[derive(Debug, Clone, Copy, Default)]
pub struct L1Oracle;

impl DiversityOracle for L1Oracle {
    fn evaluate(&self, set: &PointSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        Ok(l1_value(set))
    }

    fn coordinate_separable(&self) -> bool {
        true
    }
}

/// The diversity `δ_neg`, equal to `R(·, SimplexNeg)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegOracle;

impl DiversityOracle for NegOracle {
    fn evaluate(&self, set: &PointSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        Ok(simplex_neg_closed_form(set).1)
    }
}

/// `A ↦ R(A, K)` for a fixed, validated kernel.
#[derive(Debug, Clone)]
pub struct KernelOracle {
    kernel: Kernel,
    seed: u64,
}

impl KernelOracle {
    pub fn new(kernel: Kernel) -> Result<Self> {
        kernel.validate()?;
        Ok(Self {
            kernel,
            seed: DEFAULT_SEED,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }
}

impl DiversityOracle for KernelOracle {
    fn evaluate(&self, set: &PointSet) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        Ok(solve_unchecked(set, &self.kernel, self.seed)?.radius)
    }

    fn coordinate_separable(&self) -> bool {
        // R(A, T[0,1]^d) with diagonal T is the max, not the sum, of scaled
        // ranges; it is separable only in one dimension.
        self.kernel.dim() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        ["a", "b", "c", "d", "e", "f"][..n].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        assert!(FiniteDiversity::new(labels(2), vec![0.0, 0.0, 0.0]).is_err());
        assert!(FiniteDiversity::new(labels(2), vec![0.0, 1.0, 0.0, 1.0]).is_err());
        assert!(FiniteDiversity::new(labels(2), vec![0.0, 0.0, 0.0, -1.0]).is_err());
        assert!(FiniteDiversity::new(labels(2), vec![0.0, 0.0, 0.0, f64::NAN]).is_err());
        assert!(FiniteDiversity::new(vec!["a".into(), "a".into()], vec![0.0; 4]).is_err());
        assert!(FiniteDiversity::count((0..17).map(|i| format!("x{i}")).collect()).is_err());
    }

    #[test]
    fn induced_metric_cases() {
        let m = induced_metric(&FiniteDiversity::count(labels(1)).unwrap());
        assert_eq!(m, DMatrix::zeros(1, 1));
        let m = induced_metric(&FiniteDiversity::count(labels(3)).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn diameter_round_trip() {
        let d = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0, 0.0]);
        let delta = diameter_diversity(&d, labels(3)).unwrap();
        assert_eq!(delta.value(0b111), 2.0);
        assert_eq!(induced_metric(&delta), d);
        assert!(is_diameter(&delta));

        let two = DMatrix::from_row_slice(2, 2, &[0.0, 0.25, 0.25, 0.0]);
        assert_eq!(diameter_diversity(&two, labels(2)).unwrap().value(0b11), 0.25);

        assert!(!is_diameter(&FiniteDiversity::count(labels(4)).unwrap()));
    }

    #[test]
    fn diameter_rejects_non_semimetric() {
        let bad = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0]);
        assert!(matches!(diameter_diversity(&bad, labels(3)), Err(Error::NotSemimetric(_))));
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(diameter_diversity(&asym, labels(2)), Err(Error::NotSemimetric(_))));
    }

    #[test]
    fn l1_values() {
        let p = PointSet::from_coords([vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let d = l1_diversity(&p).unwrap();
        assert_eq!(d.value(0b111), 2.0);
        assert_eq!(d.value(0b011), 1.0);
        assert_eq!(d.value(0b001), 0.0);
        assert_eq!(d.labels(), ["p0", "p1", "p2"]);
    }

    #[test]
    fn kernel_values() {
        let cube = PointSet::from_coords([
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let d = kernel_diversity(&cube, &Kernel::unit_cube(2)).unwrap();
        assert!((d.value(0b1111) - 1.0).abs() < 1e-12);

        let p = PointSet::from_coords([vec![0.0, 0.0], vec![-1.0, 0.0], vec![0.0, -1.0]]).unwrap();
        let d = kernel_diversity(&p, &Kernel::simplex_pos(2)).unwrap();
        for pair in [0b011, 0b101, 0b110] {
            assert!((d.value(pair) - 1.0).abs() < 1e-12);
        }
        assert!((d.value(0b111) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn combinators() {
        let count = FiniteDiversity::count(labels(3)).unwrap();
        let one = FiniteDiversity::constant(labels(3), 1.0).unwrap();
        assert_eq!(max_combine(&count, &count).unwrap(), count);
        let m = max_combine(&count, &one).unwrap();
        assert_eq!(m.value(0b011), 1.0);
        assert_eq!(m.value(0b111), 2.0);
        let s = scale(2.0, &count).unwrap();
        for mask in 0..8usize {
            assert_eq!(s.value(mask), 2.0 * (mask.count_ones() as f64 - 1.0).max(0.0));
        }
        assert!(scale(0.0, &count).is_err());
        assert_eq!(max_combine(&count, &FiniteDiversity::count(labels(2)).unwrap()), Err(Error::LabelMismatch));
    }

    #[test]
    fn profiles() {
        let f = symmetric_profile(&FiniteDiversity::count(labels(5)).unwrap()).unwrap();
        assert_eq!(f.f, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let f = symmetric_profile(&FiniteDiversity::constant(labels(4), 1.0).unwrap()).unwrap();
        assert_eq!(f.f, vec![0.0, 1.0, 1.0, 1.0]);

        let perturbed = FiniteDiversity::count(labels(3)).unwrap().with_value(0b110, 1.5).unwrap();
        match symmetric_profile(&perturbed) {
            Err(Error::NotSymmetric { first, second }) => {
                assert_eq!(first, ["a", "b"]);
                assert_eq!(second, ["b", "c"]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oracles() {
        let p = PointSet::from_coords([vec![0.0, 0.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(L1Oracle.evaluate(&p).unwrap(), 3.0);
        assert_eq!(NegOracle.evaluate(&p).unwrap(), 3.0);
        let closure = |s: &PointSet| Ok(s.len() as f64);
        assert_eq!(closure.evaluate(&p).unwrap(), 2.0);
        let k = KernelOracle::new(Kernel::unit_cube(2)).unwrap();
        assert!((k.evaluate(&p).unwrap() - 2.0).abs() < 1e-12);
        assert!(L1Oracle.coordinate_separable() && !NegOracle.coordinate_separable());
    }
}
