//! Symmetric diversities: the ratio criterion and the inductive product embedding.

use serde::Serialize;

use super::Embedding;
use crate::diversity::{symmetric_profile, FiniteDiversity, SymmetricProfile};
use crate::error::{Error, Result};
use crate::geomkit::Kernel;

/// Dimension budget for [`symmetric_embed`].
pub const MAX_EMBED_DIM: usize = 64;

const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricWitness {
    /// Cardinality of the violating set `A`.
    pub k: usize,
    /// `δ(A ∖ {a}) / δ(A) = f(k−2)/f(k−1)`.
    pub ratio: f64,
    /// `(k−2)/(k−1)`.
    pub bound: f64,
    pub subset: Vec<String>,
    pub removed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetricCriterion {
    pub embeddable: bool,
    pub profile: Vec<f64>,
    /// `f(k−2)/f(k−1)` for `k = 2..=n` (`1` when both vanish).
    pub ratios: Vec<f64>,
    pub witness: Option<SymmetricWitness>,
}

/// Checks `f(k−2)/f(k−1) ≥ (k−2)/(k−1)` for `k = 2..=n`, which for a symmetric
/// diversity is equivalent to Minkowski-embeddability.
pub fn symmetric_embeddable(delta: &FiniteDiversity) -> Result<SymmetricCriterion> {
    let profile = symmetric_profile(delta)?;
    check_increasing(&profile)?;
    let f = &profile.f;
    let slack = RATIO_SLACK * (1.0 + f.last().copied().unwrap_or(0.0));
    let mut ratios = Vec::new();
    let mut witness = None;
    for k in 2..=f.len() {
        let (num, den) = (f[k - 2], f[k - 1]);
        let ratio = if den > 0.0 { num / den } else { 1.0 };
        let bound = (k - 2) as f64 / (k - 1) as f64;
        ratios.push(ratio);
        if witness.is_none() && num * (k - 1) as f64 + slack < den * (k - 2) as f64 {
            let subset: Vec<String> = delta.labels()[..k].to_vec();
            witness = Some(SymmetricWitness {
                k,
                ratio,
                bound,
                removed: subset[0].clone(),
                subset,
            });
        }
    }
    Ok(SymmetricCriterion {
        embeddable: witness.is_none(),
        profile: profile.f,
        ratios,
        witness,
    })
}

fn check_increasing(profile: &SymmetricProfile) -> Result<()> {
    if profile.is_increasing() {
        Ok(())
    } else {
        Err(Error::PreconditionUnmet(format!(
            "profile {:?} decreases, so the table is not monotone",
            profile.f
        )))
    }
}

/// A kernel with one point per element of a symmetric ground set.
struct Realization {
    kernel: Kernel,
    points: Vec<Vec<f64>>,
}

impl Realization {
    fn dim(&self) -> usize {
        self.kernel.dim()
    }
}

/// Builds an embedding of a symmetric diversity satisfying the ratio criterion.
///
/// Profiles that are constant or linear in the cardinality embed directly as
/// simplex vertex sets. Otherwise the first `m` elements are embedded by
/// induction: `δ` on `m` elements is the maximum of `m − 1` copies of the
/// `(m−1)`-element embedding (each mapping the new element onto an old one)
/// and the scaled count diversity `((|A|−1)/(m−1)) f(m−1)`, realized through a
/// product kernel.
pub fn symmetric_embed(delta: &FiniteDiversity) -> Result<Embedding> {
    let criterion = symmetric_embeddable(delta)?;
    if let Some(w) = &criterion.witness {
        return Err(Error::CriterionFails(format!(
            "k = {}: ratio {} < bound {}",
            w.k, w.ratio, w.bound
        )));
    }
    let f = &criterion.profile;
    if f.is_empty() {
        return Err(Error::Empty("ground set"));
    }
    let real = realize(f)?;
    let embedding = Embedding::from_rows(delta.labels(), real.points, real.kernel)?;
    embedding.verify(delta)?;
    Ok(embedding)
}

fn realize(f: &[f64]) -> Result<Realization> {
    let m = f.len();
    let scale = f.last().copied().unwrap_or(0.0).abs().max(1.0);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * scale;
    if m <= 2 || f[1..].iter().all(|&v| close(v, f[1])) {
        return Ok(simplex_vertices(m, f.get(1).copied().unwrap_or(0.0), 1.0));
    }
    if f.iter().enumerate().all(|(k, &v)| close(v, k as f64 * f[1])) {
        return Ok(simplex_vertices(m, f[1], -1.0));
    }

    let prev = realize(&f[..m - 1])?;
    let dim = (m - 1) * (prev.dim() + 1);
    if dim > MAX_EMBED_DIM {
        return Err(Error::BudgetExceeded {
            needed: dim as u128,
            budget: MAX_EMBED_DIM as u128,
        });
    }
    let count = simplex_vertices(m, f[m - 1] / (m - 1) as f64, -1.0);
    let mut factors = Vec::with_capacity(m);
    let mut points = vec![Vec::with_capacity(dim); m];
    for i in 0..m - 1 {
        factors.push(prev.kernel.clone());
        for (x, p) in points.iter_mut().enumerate() {
            let source = if x == m - 1 { i } else { x };
            p.extend_from_slice(&prev.points[source]);
        }
    }
    factors.push(count.kernel);
    for (p, q) in points.iter_mut().zip(&count.points) {
        p.extend_from_slice(q);
    }
    Ok(Realization {
        kernel: Kernel::product_of(factors).expect("nonempty"),
        points,
    })
}

/// `m` points `scale · sign · {0, e_1, …, e_{m−1}}` against `conv(0, e_1, …, e_{m−1})`.
///
/// With `sign = 1` every set of two or more points has radius `scale`; with
/// `sign = −1` a set of `k` points has radius `(k − 1) · scale`.
fn simplex_vertices(m: usize, scale: f64, sign: f64) -> Realization {
    let d = m.saturating_sub(1).max(1);
    let points = (0..m)
        .map(|x| {
            let mut p = vec![0.0; d];
            if x > 0 {
                p[x - 1] = sign * scale;
            }
            p
        })
        .collect();
    Realization {
        kernel: Kernel::simplex_pos(d),
        points,
    }
}

/// Embeds a three-element diversity with equal pair values `p` as
/// `p · (δ₁ ∨ (x/2) δ₂)`, `x = δ(X)/p`, where `δ₁` is constant and `δ₂` counts.
pub fn three_point_embed(delta: &FiniteDiversity) -> Result<Embedding> {
    if delta.len() != 3 {
        return Err(Error::PreconditionUnmet(format!(
            "expected 3 labels, got {}",
            delta.len()
        )));
    }
    let pairs = [0b011, 0b101, 0b110].map(|m| delta.value(m));
    let p = pairs[0];
    if pairs.iter().any(|&v| (v - p).abs() > 1e-9 * (1.0 + p)) {
        return Err(Error::PreconditionUnmet(format!("pair values differ: {pairs:?}")));
    }
    if !(p > 0.0) {
        return Err(Error::PreconditionUnmet("pair values must be positive".into()));
    }
    let x = delta.value(0b111) / p;
    if !(1.0 - 1e-9..=2.0 + 1e-9).contains(&x) {
        return Err(Error::PreconditionUnmet(format!(
            "δ(X)/pair = {x} outside [1, 2]; the table is not a diversity"
        )));
    }
    let one = simplex_vertices(3, p, 1.0);
    let count = simplex_vertices(3, p * x / 2.0, -1.0);
    let rows = one
        .points
        .iter()
        .zip(&count.points)
        .map(|(a, b)| a.iter().chain(b).copied().collect())
        .collect();
    let embedding = Embedding::from_rows(
        delta.labels(),
        rows,
        Kernel::product(one.kernel, count.kernel),
    )?;
    embedding.verify(delta)?;
    Ok(embedding)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    }

    #[test]
    fn criterion_examples() {
        let count = symmetric_embeddable(&FiniteDiversity::count(labels(5)).unwrap()).unwrap();
        assert!(count.embeddable);
        for (i, r) in count.ratios.iter().enumerate() {
            let k = i + 2;
            assert_eq!(*r, (k - 2) as f64 / (k - 1) as f64);
        }
        assert!(symmetric_embeddable(&FiniteDiversity::constant(labels(5), 1.0).unwrap()).unwrap().embeddable);

        let bad = FiniteDiversity::from_profile(labels(4), &[0.0, 1.0, 1.0, 2.0]).unwrap();
        let c = symmetric_embeddable(&bad).unwrap();
        assert!(!c.embeddable);
        let w = c.witness.unwrap();
        assert_eq!((w.k, w.ratio), (4, 0.5));
        assert!((w.bound - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(symmetric_embed(&bad), Err(Error::CriterionFails(_))));
    }

    #[test]
    fn non_symmetric_and_decreasing() {
        let d = FiniteDiversity::count(labels(3)).unwrap().with_value(0b011, 0.5).unwrap();
        assert!(matches!(symmetric_embeddable(&d), Err(Error::NotSymmetric { .. })));
        let d = FiniteDiversity::from_profile(labels(3), &[0.0, 2.0, 1.0]).unwrap();
        assert!(matches!(symmetric_embeddable(&d), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn embeds_examples() {
        let pair = FiniteDiversity::from_profile(labels(2), &[0.0, 3.0]).unwrap();
        let e = symmetric_embed(&pair).unwrap();
        assert!((e.diversity().unwrap().value(0b11) - 3.0).abs() < 1e-12);

        let count = FiniteDiversity::count(labels(4)).unwrap();
        let e = symmetric_embed(&count).unwrap();
        assert!((e.diversity().unwrap().value(0b1111) - 3.0).abs() < 1e-12);
        assert_eq!(e.kernel, Kernel::simplex_pos(3));

        let one = FiniteDiversity::constant(labels(3), 1.0).unwrap();
        let e = symmetric_embed(&one).unwrap();
        assert_eq!(e.kernel, Kernel::simplex_pos(2));
    }

    #[test]
    fn inductive_construction() {
        for f in [
            vec![0.0, 1.0, 1.5],
            vec![0.0, 1.0, 1.5, 1.8],
            vec![0.0, 2.0, 3.0, 4.0, 4.5],
            vec![0.0, 1.0, 2.0, 2.5, 3.0],
        ] {
            let d = FiniteDiversity::from_profile(labels(f.len()), &f).unwrap();
            let e = symmetric_embed(&d).unwrap();
            assert!(e.dim() <= MAX_EMBED_DIM);
        }
        let big = FiniteDiversity::from_profile(labels(6), &[0.0, 1.0, 1.5, 2.0, 2.4, 2.8]).unwrap();
        assert!(matches!(symmetric_embed(&big), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn three_points() {
        for x in [1.0, 1.5, 2.0] {
            let d = FiniteDiversity::from_profile(labels(3), &[0.0, 0.8, 0.8 * x]).unwrap();
            let e = three_point_embed(&d).unwrap();
            assert!((e.diversity().unwrap().value(0b111) - 0.8 * x).abs() < 1e-12);
        }
        let uneven = FiniteDiversity::count(labels(3)).unwrap().with_value(0b011, 0.5).unwrap();
        assert!(three_point_embed(&uneven).is_err());
    }
}
