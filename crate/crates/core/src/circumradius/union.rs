use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::solve_unchecked;
use crate::diversity::DiversityOracle;
use crate::error::{check_dim, Error, Result};
use crate::geomkit::{Kernel, Point, PointSet};
use crate::DEFAULT_SEED;

/// Translations `a`, `b` placing `A + a` and `B + b` inside one copy of `max(λ_A, λ_B)·K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionTranslation {
    pub a: Point,
    pub b: Point,
    /// `R((A + a) ∪ (B + b), K)`.
    pub value: f64,
    pub radius_a: f64,
    pub radius_b: f64,
}

impl UnionTranslation {
    pub fn max_individual(&self) -> f64 {
        self.radius_a.max(self.radius_b)
    }
}

/// Builds the translations from the two circumsolutions: with `μ = max(λ_A, λ_B)`
/// and `k₀ ∈ K`, `A ⊆ λ_A K + x_A` implies `A − x_A + (μ − λ_A)k₀ ⊆ μK`.
pub fn union_translation_witness(
    a: &PointSet,
    b: &PointSet,
    kernel: &Kernel,
) -> Result<UnionTranslation> {
    kernel.validate()?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("union translation operand"));
    }
    check_dim(kernel.dim(), a.dim())?;
    check_dim(kernel.dim(), b.dim())?;
    let sa = solve_unchecked(a, kernel, DEFAULT_SEED)?;
    let sb = solve_unchecked(b, kernel, DEFAULT_SEED)?;
    let mu = sa.radius.max(sb.radius);
    let k0 = kernel.reference_point()?;
    let shift = |center: &Point, lambda: f64| -> Result<Point> {
        Point::new(
            center
                .coords()
                .iter()
                .zip(&k0)
                .map(|(x, k)| -x + (mu - lambda) * k)
                .collect(),
        )
    };
    let ta = shift(&sa.center, sa.radius)?;
    let tb = shift(&sb.center, sb.radius)?;
    let union = a.translate(ta.coords())?.union(&b.translate(tb.coords())?)?;
    let value = solve_unchecked(&union, kernel, DEFAULT_SEED)?.radius;
    Ok(UnionTranslation {
        a: ta,
        b: tb,
        value,
        radius_a: sa.radius,
        radius_b: sb.radius,
    })
}

/// Outcome of [`min_union_translation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionSearch {
    /// Smallest `δ(A ∪ (B + b))` found; an upper bound on the true minimum.
    pub value: f64,
    pub translation: Vec<f64>,
    /// True when the oracle is coordinate-separable, so the coordinate-wise
    /// minimum found is the global one.
    pub exact: bool,
    pub evaluations: usize,
}

const STARTS: usize = 5;
const MAX_SWEEPS: usize = 200;
const GOLDEN_ITERATIONS: usize = 200;

/// Minimizes `b ↦ δ(A ∪ (B + b))` by cyclic coordinate descent with a
/// golden-section line search per coordinate, from five starting points
/// (`b = 0`, centroid alignment, three seeded random points).
///
/// For a translation-invariant oracle this equals the minimum over both
/// translations `a`, `b`. The result is a coordinate-wise local minimum and
/// therefore an upper bound on the true minimum; it is exact for
/// coordinate-separable oracles (see [`DiversityOracle::coordinate_separable`]).
pub fn min_union_translation<O: DiversityOracle + ?Sized>(
    a: &PointSet,
    b: &PointSet,
    oracle: &O,
) -> Result<UnionSearch> {
    min_union_translation_seeded(a, b, oracle, DEFAULT_SEED)
}

pub fn min_union_translation_seeded<O: DiversityOracle + ?Sized>(
    a: &PointSet,
    b: &PointSet,
    oracle: &O,
    seed: u64,
) -> Result<UnionSearch> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("union translation operand"));
    }
    check_dim(a.dim(), b.dim())?;
    let d = a.dim();
    let mut evaluations = 0usize;
    let mut eval = |t: &[f64]| -> Result<f64> {
        evaluations += 1;
        oracle.evaluate(&a.union(&b.translate(t)?)?)
    };

    // Search box: B + b overlaps A's bounding box in every coordinate, widened by the span.
    let range = |s: &PointSet, i: usize| {
        s.coords()
            .map(|p| p[i])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let mut lo = vec![0.0; d];
    let mut hi = vec![0.0; d];
    for i in 0..d {
        let (al, ah) = range(a, i);
        let (bl, bh) = range(b, i);
        let span = (ah - al) + (bh - bl) + 1.0;
        lo[i] = al - bh - span;
        hi[i] = ah - bl + span;
    }

    let centroid = |s: &PointSet| -> Vec<f64> {
        let mut c = vec![0.0; d];
        for p in s.coords() {
            c.iter_mut().zip(p).for_each(|(x, v)| *x += v);
        }
        c.iter().map(|x| x / s.len() as f64).collect()
    };
    let (ca, cb) = (centroid(a), centroid(b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts = vec![vec![0.0; d], ca.iter().zip(&cb).map(|(x, y)| x - y).collect()];
    while starts.len() < STARTS {
        starts.push((0..d).map(|i| rng.gen_range(lo[i]..=hi[i])).collect());
    }

    let mut best: Option<(f64, Vec<f64>)> = None;
    for start in starts {
        let mut t = start;
        let mut value = eval(&t)?;
        for _ in 0..MAX_SWEEPS {
            let before = value;
            for i in 0..d {
                let (x, v) = golden_section(lo[i].min(t[i]), hi[i].max(t[i]), |x| {
                    let mut probe = t.clone();
                    probe[i] = x;
                    eval(&probe)
                })?;
                if v < value {
                    value = v;
                    t[i] = x;
                }
            }
            if before - value <= 1e-12 * (1.0 + value.abs()) {
                break;
            }
        }
        // keep the first start on ties so that `b = 0` wins when optimal
        if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best = Some((value, t));
        }
    }
    let (value, translation) = best.expect("at least one start");
    Ok(UnionSearch {
        value,
        translation,
        exact: oracle.coordinate_separable(),
        evaluations,
    })
}

fn golden_section<F>(mut lo: f64, mut hi: f64, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let tol = 1e-10 * (1.0 + hi.abs().max(lo.abs()));
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}
