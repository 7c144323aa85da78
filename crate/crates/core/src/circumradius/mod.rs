//! Generalized circumradius `R(A, K)` with witness centers.
//!
//! A [`Circumsolution`] `(λ, x)` certifies `A ⊆ λK + x`. Polytopes given by
//! inequalities are solved by linear programming; every other variant uses a
//! closed form or a reduction:
//!
//! | kernel          | method                                                  |
//! |-----------------|---------------------------------------------------------|
//! | `HPolytope`     | LP over `(λ, x)`                                         |
//! | `Ball`          | minimal enclosing ball, move-to-front                    |
//! | `Parallelotope` | pull back by the map, largest coordinate range           |
//! | `SimplexPos`    | `max_a Σa_i − Σ_i min_a a_i`                              |
//! | `SimplexNeg`    | `Σ_i max_a a_i − min_a Σa_i`                              |
//! | `Product`       | max over the two coordinate projections                  |
//! | `AffineImage`   | solve against the base on the pulled-back points         |

mod ball;
mod coreset;
mod union;

use serde::{Deserialize, Serialize};

pub use ball::{min_enclosing_ball, EnclosingBall};
pub use coreset::{ball_core_set, ball_core_set_bound, core_set, core_set_bound, CoreSetResult};
pub use union::{
    min_union_translation, min_union_translation_seeded, union_translation_witness,
    UnionSearch, UnionTranslation,
};

use crate::error::{check_dim, Error, Result};
use crate::geomkit::{AffineMap, Kernel, Point, PointSet};
use crate::linprog::{self, LinearProgram, LpResult};
use crate::DEFAULT_SEED;

/// Radius `λ ≥ 0` and center `x` with `A ⊆ λK + x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circumsolution {
    pub radius: f64,
    pub center: Point,
}

impl Circumsolution {
    /// Checks `A ⊆ λK + x` with `slack` in every defining inequality.
    pub fn covers(&self, set: &PointSet, kernel: &Kernel, slack: f64) -> bool {
        set.coords().all(|a| {
            let rel: Vec<f64> = a.iter().zip(self.center.coords()).map(|(p, c)| p - c).collect();
            kernel.contains_scaled(&rel, self.radius, slack)
        })
    }
}

/// `R(A, K)` with a witness center, using the default seed for the ball solver.
pub fn circumradius(set: &PointSet, kernel: &Kernel) -> Result<Circumsolution> {
    circumradius_seeded(set, kernel, DEFAULT_SEED)
}

/// As [`circumradius`], with an explicit seed for the randomized ball solver.
pub fn circumradius_seeded(set: &PointSet, kernel: &Kernel, seed: u64) -> Result<Circumsolution> {
    kernel.validate()?;
    solve_unchecked(set, kernel, seed)
}

/// Dispatch without re-validating the kernel.
pub(crate) fn solve_unchecked(set: &PointSet, kernel: &Kernel, seed: u64) -> Result<Circumsolution> {
    let first = set.points().first().ok_or(Error::Empty("point set"))?;
    check_dim(kernel.dim(), set.dim())?;
    if set.all_equal() {
        return Ok(Circumsolution {
            radius: 0.0,
            center: first.clone(),
        });
    }
    match kernel {
        Kernel::HPolytope { normals, offsets } => hpolytope_radius(set, normals, offsets),
        Kernel::Ball { dim } => {
            let pts: Vec<&[f64]> = set.coords().collect();
            let b = min_enclosing_ball(&pts, *dim, seed);
            Ok(Circumsolution {
                radius: b.radius,
                center: Point::new(b.center)?,
            })
        }
        Kernel::SimplexPos { .. } => {
            let (z, lambda) = simplex_pos_closed_form(set);
            Ok(Circumsolution {
                radius: lambda,
                center: Point::new(z)?,
            })
        }
        Kernel::SimplexNeg { .. } => {
            let (z, lambda) = simplex_neg_closed_form(set);
            Ok(Circumsolution {
                radius: lambda,
                center: Point::new(z)?,
            })
        }
        Kernel::Parallelotope { map } => {
            let pulled = pull_back_linear(map, set)?;
            let d = map.input_dim();
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            for y in &pulled {
                for i in 0..d {
                    lo[i] = lo[i].min(y[i]);
                    hi[i] = hi[i].max(y[i]);
                }
            }
            let lambda = lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| h - l)
                .fold(0.0f64, f64::max);
            Ok(Circumsolution {
                radius: lambda,
                center: Point::new(push_forward_center(map, &lo, lambda))?,
            })
        }
        Kernel::Product { left, right } => {
            let p = left.dim();
            let l = solve_unchecked(&set.project(0..p), left, seed)?;
            let r = solve_unchecked(&set.project(p..p + right.dim()), right, seed)?;
            // Each factor's center is only pinned down up to the slack between its
            // radius and the common one; pad the smaller factor toward its reference point.
            let radius = l.radius.max(r.radius);
            let mut center = widen_center(left, &l, radius)?;
            center.extend(widen_center(right, &r, radius)?);
            Ok(Circumsolution {
                radius,
                center: Point::new(center)?,
            })
        }
        Kernel::AffineImage { map, base } => {
            let pulled = PointSet::from_coords(pull_back_linear(map, set)?)?;
            let sol = solve_unchecked(&pulled, base, seed)?;
            Ok(Circumsolution {
                radius: sol.radius,
                center: Point::new(push_forward_center(map, sol.center.coords(), sol.radius))?,
            })
        }
    }
}

/// Center `x'` with `λ_K K + x ⊆ λ K + x'` for `λ ≥ λ_K`.
fn widen_center(kernel: &Kernel, sol: &Circumsolution, lambda: f64) -> Result<Vec<f64>> {
    let gap = lambda - sol.radius;
    if gap <= 0.0 {
        return Ok(sol.center.coords().to_vec());
    }
    let k0 = kernel.reference_point()?;
    Ok(sol
        .center
        .coords()
        .iter()
        .zip(&k0)
        .map(|(c, k)| c - gap * k)
        .collect())
}

/// `M⁻¹a` for every point.
fn pull_back_linear(map: &AffineMap, set: &PointSet) -> Result<Vec<Vec<f64>>> {
    let lu = map.matrix().clone().lu();
    set.coords()
        .map(|a| {
            lu.solve(&nalgebra::DVector::from_column_slice(a))
                .map(|v| v.iter().copied().collect())
                .ok_or(Error::DegenerateMap { det: 0.0 })
        })
        .collect()
}

/// If `M⁻¹A ⊆ λB + z` then `A ⊆ λ·map(B) + (Mz − λt)`.
fn push_forward_center(map: &AffineMap, z: &[f64], lambda: f64) -> Vec<f64> {
    map.apply_linear(z)
        .into_iter()
        .zip(map.offset())
        .map(|(v, t)| v - lambda * t)
        .collect()
}

/// Center `z = min_a a` and radius `max_a Σa − Σ z`.
pub fn simplex_pos_closed_form(set: &PointSet) -> (Vec<f64>, f64) {
    let d = set.dim();
    let mut z = vec![f64::INFINITY; d];
    let mut max_sum = f64::NEG_INFINITY;
    for a in set.coords() {
        for i in 0..d {
            z[i] = z[i].min(a[i]);
        }
        max_sum = max_sum.max(a.iter().sum());
    }
    let lambda = (max_sum - z.iter().sum::<f64>()).max(0.0);
    (z, lambda)
}

/// Center `z = max_a a` and radius `Σ z − min_a Σa` (the `δ_neg` value).
pub fn simplex_neg_closed_form(set: &PointSet) -> (Vec<f64>, f64) {
    let d = set.dim();
    let mut z = vec![f64::NEG_INFINITY; d];
    let mut min_sum = f64::INFINITY;
    for a in set.coords() {
        for i in 0..d {
            z[i] = z[i].max(a[i]);
        }
        min_sum = min_sum.min(a.iter().sum());
    }
    let lambda = (z.iter().sum::<f64>() - min_sum).max(0.0);
    (z, lambda)
}

/// The containment LP: minimize `λ` subject to
/// `⟨h_i, a⟩ − ⟨h_i, x⟩ ≤ λ c_i` for all `a ∈ A` and facets `i`, `λ ≥ 0`.
/// Variables are ordered `(λ, x_1, …, x_d)`.
pub fn containment_lp(set: &PointSet, normals: &[Vec<f64>], offsets: &[f64]) -> LinearProgram {
    let d = set.dim();
    let mut objective = vec![0.0; d + 1];
    objective[0] = 1.0;
    let mut lp = LinearProgram::minimize(objective).with_lower(0, 0.0);
    for a in set.coords() {
        for (h, c) in normals.iter().zip(offsets) {
            let mut row = Vec::with_capacity(d + 1);
            row.push(-c);
            row.extend(h.iter().map(|v| -v));
            let ha: f64 = h.iter().zip(a).map(|(x, y)| x * y).sum();
            lp.push_leq(row, -ha);
        }
    }
    lp
}

/// Solves [`containment_lp`] and returns the raw result alongside the program.
pub fn solve_containment_lp(
    set: &PointSet,
    normals: &[Vec<f64>],
    offsets: &[f64],
) -> Result<(LinearProgram, LpResult)> {
    let lp = containment_lp(set, normals, offsets);
    let res = linprog::solve(&lp)?;
    Ok((lp, res))
}

fn hpolytope_radius(set: &PointSet, normals: &[Vec<f64>], offsets: &[f64]) -> Result<Circumsolution> {
    let (_, res) = solve_containment_lp(set, normals, offsets)?;
    let sol = res
        .solution
        .ok_or_else(|| Error::SolverStatus(format!("containment LP ended {:?}", res.status)))?;
    Ok(Circumsolution {
        radius: sol[0].max(0.0),
        center: Point::new(sol[1..].to_vec())?,
    })
}
