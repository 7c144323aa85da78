//! Reproductions of the worked examples: the `L1` union counterexample, the
//! non-convex mixture of two Minkowski diversities, and a covering scene.

use serde::Serialize;

use crate::circumradius::{circumradius, min_union_translation_seeded, Circumsolution};
use crate::diversity::{DiversityOracle, KernelOracle, L1Oracle};
use crate::error::{Error, Result};
use crate::geomkit::{Kernel, PointSet};

use super::svg::Scene;

fn set(rows: &[[f64; 2]]) -> PointSet {
    PointSet::from_coords(rows.iter().map(|r| r.to_vec())).expect("fixed coordinates")
}

#[derive(Debug, Clone, Serialize)]
pub struct L1Counterexample {
    pub a: PointSet,
    pub b: PointSet,
    pub min_union_value: f64,
    pub translation: Vec<f64>,
    pub max_individual: f64,
    pub violates_condition: bool,
    pub exact: bool,
}

/// `A = {0, e₁}`, `B = {0, e₂}` under `δ₁`: every union of translates has
/// value at least 2 while each set alone has value 1.
pub fn l1_counterexample(seed: u64) -> Result<L1Counterexample> {
    let a = set(&[[0.0, 0.0], [1.0, 0.0]]);
    let b = set(&[[0.0, 0.0], [0.0, 1.0]]);
    let search = min_union_translation_seeded(&a, &b, &L1Oracle, seed)?;
    let max_individual = L1Oracle.evaluate(&a)?.max(L1Oracle.evaluate(&b)?);
    Ok(L1Counterexample {
        violates_condition: search.value > max_individual + 1e-6,
        a,
        b,
        min_union_value: search.value,
        translation: search.translation,
        max_individual,
        exact: search.exact,
    })
}

/// Convex hull of planar points as an H-polytope (monotone chain).
pub fn hull_kernel(points: &[[f64; 2]]) -> Result<Kernel> {
    let mut pts = points.to_vec();
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts.dedup();
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    if hull.len() < 3 {
        return Err(Error::InvalidKernel("hull has empty interior".into()));
    }
    // counter-clockwise order: outward normal of edge p→q is (q_y − p_y, p_x − q_x)
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for i in 0..hull.len() {
        let (p, q) = (hull[i], hull[(i + 1) % hull.len()]);
        let n = [q[1] - p[1], p[0] - q[0]];
        normals.push(n.to_vec());
        offsets.push(n[0] * p[0] + n[1] * p[1]);
    }
    Kernel::hpolytope(normals, offsets)
}

/// `δ(Y) = ½R(Y, K) + ½R(Y, K')`.
pub struct MixtureOracle {
    pub k: KernelOracle,
    pub k_prime: KernelOracle,
}

impl DiversityOracle for MixtureOracle {
    fn evaluate(&self, set: &PointSet) -> Result<f64> {
        Ok(0.5 * self.k.evaluate(set)? + 0.5 * self.k_prime.evaluate(set)?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Anchor {
    pub b: Vec<f64>,
    pub r_k: f64,
    pub r_k_prime: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NonConvexReport {
    pub a: PointSet,
    pub b: PointSet,
    pub b_prime: PointSet,
    pub k: Kernel,
    pub k_prime: Kernel,
    pub delta_a: f64,
    pub delta_b: f64,
    pub max_individual: f64,
    pub anchors: Vec<Anchor>,
    /// Smallest `δ(A ∪ (B + b))` over the multistart search and the grid.
    pub min_union_value: f64,
    pub translation: Vec<f64>,
    pub exceeds_max: bool,
}

pub fn nonconvex_sets() -> (PointSet, PointSet, PointSet) {
    (
        set(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
        set(&[[1.0, 0.0], [2.0, 0.0], [1.0, 1.0]]),
        set(&[[0.0, 1.0], [1.0, 1.0], [0.0, 2.0]]),
    )
}

fn rows(s: &PointSet) -> Vec<[f64; 2]> {
    s.points().iter().map(|p| [p[0], p[1]]).collect()
}

/// The mixture `½R(·, conv(A∪B)) + ½R(·, conv(A∪B'))` is not a Minkowski
/// diversity: no translate of `B` joins `A` without exceeding `max{δ(A), δ(B)}`.
pub fn nonconvex(seed: u64) -> Result<NonConvexReport> {
    let (a, b, b_prime) = nonconvex_sets();
    let k = hull_kernel(&[rows(&a), rows(&b)].concat())?;
    let k_prime = hull_kernel(&[rows(&a), rows(&b_prime)].concat())?;
    let oracle = MixtureOracle {
        k: KernelOracle::new(k.clone())?.with_seed(seed),
        k_prime: KernelOracle::new(k_prime.clone())?.with_seed(seed),
    };
    let delta_a = oracle.evaluate(&a)?;
    let delta_b = oracle.evaluate(&b)?;
    let max_individual = delta_a.max(delta_b);

    let anchor = |t: [f64; 2]| -> Result<Anchor> {
        let u = a.union(&b.translate(&t)?)?;
        let r_k = oracle.k.evaluate(&u)?;
        let r_k_prime = oracle.k_prime.evaluate(&u)?;
        Ok(Anchor {
            b: t.to_vec(),
            r_k,
            r_k_prime,
            value: 0.5 * (r_k + r_k_prime),
        })
    };
    let anchors = vec![anchor([0.0, 0.0])?, anchor([-1.0, 1.0])?];

    let search = min_union_translation_seeded(&a, &b, &oracle, seed)?;
    let (mut best, mut translation) = (search.value, search.translation);
    // coarse grid over the region where the translates overlap
    for i in 0..=16 {
        for j in 0..=16 {
            let t = [-2.0 + 0.25 * i as f64, -2.0 + 0.25 * j as f64];
            let v = oracle.evaluate(&a.union(&b.translate(&t)?)?)?;
            if v < best {
                best = v;
                translation = t.to_vec();
            }
        }
    }
    Ok(NonConvexReport {
        exceeds_max: best > max_individual + 1e-6,
        a,
        b,
        b_prime,
        k,
        k_prime,
        delta_a,
        delta_b,
        max_individual,
        anchors,
        min_union_value: best,
        translation,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverGroup {
    pub labels: Vec<String>,
    pub radius: f64,
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub kernel: Kernel,
    pub points: PointSet,
    pub groups: Vec<CoverGroup>,
    pub ordering_holds: bool,
}

/// A planar scene with three groups of points whose radii against the
/// standard triangle are 2, 0.6 and 1.
pub fn figure1() -> Result<(CoverReport, Scene)> {
    let labels = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "k"];
    let coords = [
        [0.0, 0.0],
        [2.0, 0.0],
        [3.0, 1.0],
        [0.0, 2.0],
        [3.6, 1.0],
        [3.0, 1.6],
        [1.0, 0.5],
        [2.5, 2.5],
        [3.5, 2.5],
        [0.5, 1.0],
    ];
    let points = set(&coords).with_labels(labels.iter().map(|s| s.to_string()).collect())?;
    let kernel = Kernel::simplex_pos(2);
    let groups_idx: [&[usize]; 3] = [&[0, 1, 3, 6, 9], &[2, 4, 5], &[7, 8]];
    let mut groups = Vec::new();
    let mut solutions: Vec<Circumsolution> = Vec::new();
    for idx in groups_idx {
        let g = points.subset(idx.iter().copied());
        let sol = circumradius(&g, &kernel)?;
        groups.push(CoverGroup {
            labels: g.all_labels(),
            radius: sol.radius,
            center: sol.center.coords().to_vec(),
        });
        solutions.push(sol);
    }
    let r: Vec<f64> = groups.iter().map(|g| g.radius).collect();
    let report = CoverReport {
        ordering_holds: r[1] < r[2] && r[2] < r[0],
        kernel: kernel.clone(),
        points: points.clone(),
        groups,
    };
    let scene = Scene {
        points,
        kernel,
        solutions,
        seed: 0,
    };
    Ok((report, scene))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1() {
        let r = l1_counterexample(crate::DEFAULT_SEED).unwrap();
        assert!((r.min_union_value - 2.0).abs() < 1e-6, "{r:?}");
        assert_eq!(r.max_individual, 1.0);
        assert!(r.violates_condition);
    }

    #[test]
    fn hull_of_square() {
        let k = hull_kernel(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.5], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        match k {
            Kernel::HPolytope { normals, .. } => assert_eq!(normals.len(), 4),
            _ => unreachable!(),
        }
        assert!(hull_kernel(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).is_err());
    }

    #[test]
    fn nonconvex_case_analysis() {
        let r = nonconvex(crate::DEFAULT_SEED).unwrap();
        assert!((r.max_individual - 1.0).abs() < 1e-6);
        assert!((r.anchors[0].r_k - 1.0).abs() < 1e-6 && r.anchors[0].r_k_prime > 1.0 + 1e-6);
        assert!((r.anchors[1].r_k_prime - 1.0).abs() < 1e-6 && r.anchors[1].r_k > 1.0 + 1e-6);
        assert!(r.exceeds_max, "{}", r.min_union_value);
    }

    #[test]
    fn cover_scene() {
        let (r, _) = figure1().unwrap();
        let radii: Vec<f64> = r.groups.iter().map(|g| g.radius).collect();
        assert!((radii[0] - 2.0).abs() < 1e-12);
        assert!((radii[1] - 0.6).abs() < 1e-12);
        assert!((radii[2] - 1.0).abs() < 1e-12);
        assert!(r.ordering_holds);
    }
}
