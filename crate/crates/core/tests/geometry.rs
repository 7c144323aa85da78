mod common;

use circumdiv::circumradius::{circumradius, simplex_neg_closed_form, simplex_pos_closed_form};
use circumdiv::diversity::{check_axioms, kernel_diversity};
use circumdiv::geomkit::{apply_map, hausdorff, in_hull, minkowski_sum};
use circumdiv::linprog::{solve, LinearProgram, LpStatus};
use circumdiv::{Kernel, Point, PointSet};
use common::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn coords(d: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, d), n)
}

fn set(rows: Vec<Vec<f64>>) -> PointSet {
    PointSet::from_coords(rows).unwrap()
}

fn kernel(d: usize) -> impl Strategy<Value = Kernel> {
    (0..VARIANTS.len(), any::<u64>())
        .prop_map(move |(v, seed)| random_kernel(&mut ChaCha8Rng::seed_from_u64(seed), VARIANTS[v], d))
}

fn radius(a: &PointSet, k: &Kernel) -> f64 {
    circumradius(a, k).unwrap().radius
}

/// Minimum of `c·x` over the vertices of `{Gx ≤ h}`, by solving every
/// square subsystem.
fn vertex_enumeration(c: &[f64], g: &[Vec<f64>], h: &[f64]) -> f64 {
    let n = c.len();
    let m = g.len();
    let mut best = f64::INFINITY;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |i, j| g[idx[i]][j]);
        let b = DVector::from_fn(n, |i, _| h[idx[i]]);
        if a.determinant().abs() > 1e-9 {
            if let Some(x) = a.lu().solve(&b) {
                let feasible = g.iter().zip(h).all(|(row, hi)| {
                    row.iter().zip(x.iter()).map(|(p, q)| p * q).sum::<f64>() <= hi + 1e-9
                });
                if feasible {
                    best = best.min(c.iter().zip(x.iter()).map(|(p, q)| p * q).sum());
                }
            }
        }
        // next combination of n rows out of m
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - n + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Random LP over a box around the origin, so it is feasible and bounded.
fn bounded_lp() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec((prop::collection::vec(-1.0..1.0f64, n), 0.1..2.0f64), 0..=8),
        )
            .prop_map(move |(c, cuts)| {
                let mut g = Vec::new();
                let mut h = Vec::new();
                for i in 0..n {
                    for s in [1.0, -1.0] {
                        let mut row = vec![0.0; n];
                        row[i] = s;
                        g.push(row);
                        h.push(3.0);
                    }
                }
                for (row, rhs) in cuts {
                    g.push(row);
                    h.push(rhs);
                }
                (c, g, h)
            })
    })
}

fn program(c: &[f64], g: &[Vec<f64>], h: &[f64]) -> LinearProgram {
    let mut lp = LinearProgram::minimize(c.to_vec());
    for (row, rhs) in g.iter().zip(h) {
        lp.push_leq(row.clone(), *rhs);
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_triangle_inequality(
        (a, b, c) in (1usize..=3).prop_flat_map(|d| (coords(d, 1..=5), coords(d, 1..=5), coords(d, 1..=5)))
    ) {
        let (a, b, c) = (set(a), set(b), set(c));
        let ab = hausdorff(&a, &b).unwrap();
        let bc = hausdorff(&b, &c).unwrap();
        let ac = hausdorff(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn map_then_inverse_is_identity(seed: u64, rows in coords(3, 1..=6)) {
        let a = set(rows);
        let t = random_map(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        let back = apply_map(&t.inverse().unwrap(), &apply_map(&t, &a).unwrap()).unwrap();
        for (p, q) in a.points().iter().zip(back.points()) {
            prop_assert!(dist(p.coords(), q.coords()) <= 1e-9);
        }
    }

    #[test]
    fn hull_of_minkowski_sum(
        (a, b, wa, wb) in (1usize..=3).prop_flat_map(|d| (coords(d, 1..=4), coords(d, 1..=4)))
            .prop_flat_map(|(a, b)| {
                let (na, nb) = (a.len(), b.len());
                (Just(a), Just(b), prop::collection::vec(0.01..1.0f64, na), prop::collection::vec(0.01..1.0f64, nb))
            })
    ) {
        // a convex combination of A plus one of B lies in conv(A + B)
        let combo = |rows: &[Vec<f64>], w: &[f64]| -> Vec<f64> {
            let s: f64 = w.iter().sum();
            (0..rows[0].len()).map(|j| rows.iter().zip(w).map(|(r, x)| r[j] * x / s).sum()).collect()
        };
        let p: Vec<f64> = combo(&a, &wa).iter().zip(combo(&b, &wb)).map(|(x, y)| x + y).collect();
        let sum = minkowski_sum(&set(a.clone()), &set(b.clone())).unwrap();
        prop_assert!(in_hull(&Point::new(p).unwrap(), &sum).unwrap());
        prop_assert!(sum.len() <= a.len() * b.len());
    }

    #[test]
    fn lp_matches_vertex_enumeration((c, g, h) in bounded_lp()) {
        let lp = program(&c, &g, &h);
        let res = solve(&lp).unwrap();
        prop_assert_eq!(res.status, LpStatus::Optimal);
        let brute = vertex_enumeration(&c, &g, &h);
        prop_assert!((res.objective_value - brute).abs() <= 1e-6, "{} vs {}", res.objective_value, brute);
        let cert = res.certificate(&lp).unwrap();
        prop_assert!(cert.primal_infeasibility <= 1e-7);
        prop_assert!(cert.complementarity <= 1e-6);
        prop_assert!(cert.stationarity <= 1e-6 && cert.dual_infeasibility <= 1e-9);
    }

    #[test]
    fn lp_scaling_and_translation((c, g, h) in bounded_lp(), lambda in 0.1..10.0f64, shift in prop::collection::vec(-1.0..1.0f64, 3)) {
        let base = solve(&program(&c, &g, &h)).unwrap();
        let scaled: Vec<f64> = c.iter().map(|v| v * lambda).collect();
        let s = solve(&program(&scaled, &g, &h)).unwrap();
        prop_assert!((s.objective_value - lambda * base.objective_value).abs() <= 1e-6 * (1.0 + lambda));

        let t = &shift[..c.len()];
        let moved_h: Vec<f64> = g.iter().zip(&h).map(|(row, hi)| hi + row.iter().zip(t).map(|(a, b)| a * b).sum::<f64>()).collect();
        let m = solve(&program(&c, &g, &moved_h)).unwrap();
        let ct: f64 = c.iter().zip(t).map(|(a, b)| a * b).sum();
        prop_assert!((m.objective_value - (base.objective_value + ct)).abs() <= 1e-6);
        // the moved argmin, shifted back, is optimal for the original program
        let x: Vec<f64> = m.solution.unwrap().iter().zip(t).map(|(a, b)| a - b).collect();
        for (row, hi) in g.iter().zip(&h) {
            prop_assert!(row.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() <= hi + 1e-7);
        }
    }

    #[test]
    fn closed_forms_match_lp(rows in (1usize..=4).prop_flat_map(|d| coords(d, 1..=7))) {
        let a = set(rows);
        let d = a.dim();
        for k in [Kernel::simplex_pos(d), Kernel::simplex_neg(d)] {
            let closed = radius(&a, &k);
            let lp = radius(&a, &k.to_hpolytope().unwrap());
            prop_assert!(close_rel(closed, lp, 1e-6), "{:?}: {} vs {}", k, closed, lp);
        }
        // centers from the closed forms cover A
        let (z, l) = simplex_pos_closed_form(&a);
        let sol = circumdiv::Circumsolution { radius: l, center: Point::new(z).unwrap() };
        prop_assert!(sol.covers(&a, &Kernel::simplex_pos(d), 1e-9));
        let (z, l) = simplex_neg_closed_form(&a);
        let sol = circumdiv::Circumsolution { radius: l, center: Point::new(z).unwrap() };
        prop_assert!(sol.covers(&a, &Kernel::simplex_neg(d), 1e-9));
    }

    #[test]
    fn welzl_matches_brute_force(rows in coords(2, 1..=8)) {
        let a = set(rows.clone());
        let w = radius(&a, &Kernel::ball(2));
        prop_assert!((w - brute_force_meb(&rows)).abs() <= 1e-9);
    }

    #[test]
    fn solutions_cover_their_sets((k, rows) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 1..=6)))) {
        let a = set(rows);
        let s = circumradius(&a, &k).unwrap();
        prop_assert!(s.radius >= 0.0);
        prop_assert!(s.covers(&a, &k, 1e-7 * (1.0 + s.radius)));
    }

    #[test]
    fn monotone_in_set_and_kernel((k, a, extra) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 1..=4), coords(d, 1..=3)))) {
        let a = set(a);
        let bigger = a.union(&set(extra)).unwrap();
        let c = k.reference_point().unwrap();
        let d = k.dim();
        let map = circumdiv::AffineMap::new(DMatrix::identity(d, d) * 0.8, c.iter().map(|v| 0.2 * v).collect()).unwrap();
        let smaller_kernel = Kernel::affine_image(map, k.clone()).unwrap();
        prop_assert!(radius(&a, &k) <= radius(&bigger, &smaller_kernel) + 1e-7);
    }

    #[test]
    fn translation_and_scaling(
        (k, rows, x, y) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 1..=5), prop::collection::vec(-3.0..3.0f64, d), prop::collection::vec(-3.0..3.0f64, d))),
        alpha in 0.2..4.0f64,
        beta in 0.2..4.0f64,
    ) {
        let a = set(rows);
        let r = radius(&a, &k);
        let moved = radius(&a.translate(&x).unwrap(), &k.translated(y).unwrap());
        prop_assert!((moved - r).abs() <= 1e-7 + 1e-9 * r);
        let scaled = radius(&a.scale(alpha).unwrap(), &k.scaled(beta).unwrap());
        prop_assert!(close_rel(scaled, alpha / beta * r, 1e-6));
    }

    #[test]
    fn minkowski_sum_bound((k, a, b) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 1..=4), coords(d, 1..=4)))) {
        let (a, b) = (set(a), set(b));
        let sum = minkowski_sum(&a, &b).unwrap();
        prop_assert!(radius(&sum, &k) <= radius(&a, &k) + radius(&b, &k) + 1e-6);
    }

    #[test]
    fn leave_one_out_bound((k, rows) in (1usize..=3).prop_flat_map(|d| (kernel(d), (3usize..=5).prop_flat_map(move |n| coords(d, n..=n))))) {
        let a = set(rows);
        let n = a.len();
        let kk = n - 1;
        let total: f64 = (0..n).map(|j| radius(&a.subset((0..n).filter(|&t| t != j)), &k)).sum();
        let bound = kk as f64 / ((kk + 1) * (kk - 1)) as f64 * total;
        prop_assert!(radius(&a, &k) <= bound + 1e-6);
    }

    #[test]
    fn product_is_max_of_projections((p, q, s1, s2, rows) in (1usize..=2, 1usize..=2).prop_flat_map(|(p, q)| (Just(p), Just(q), any::<u64>(), any::<u64>(), coords(p + q, 1..=5)))) {
        let left = random_hpolytope(&mut ChaCha8Rng::seed_from_u64(s1), p);
        let right = random_hpolytope(&mut ChaCha8Rng::seed_from_u64(s2), q);
        let product = Kernel::product(left.clone(), right.clone());
        let a = set(rows);
        let whole = radius(&a, &product);
        prop_assert_eq!(whole, radius(&a.project(0..p), &left).max(radius(&a.project(p..p + q), &right)));
        prop_assert!(close_rel(whole, radius(&a, &product.to_hpolytope().unwrap()), 1e-6));
    }

    #[test]
    fn union_triangle_inequality((k, a, b, c) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 0..=3), coords(d, 1..=3), coords(d, 0..=3)))) {
        let (a, b, c) = (set(a), set(b), set(c));
        let r = |s: &PointSet| if s.is_empty() { 0.0 } else { radius(s, &k) };
        let ac = a.union(&c).unwrap();
        let ab = a.union(&b).unwrap();
        let bc = b.union(&c).unwrap();
        prop_assert!(r(&ac) <= r(&ab) + r(&bc) + 1e-6);
    }

    #[test]
    fn lipschitz_in_hausdorff_distance(
        (k, rows, noise) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 1..=5)))
            .prop_flat_map(|(k, rows)| {
                let (n, d) = (rows.len(), rows[0].len());
                (Just(k), Just(rows), coords(d, n..=n))
            })
    ) {
        let a = set(rows.clone());
        let b = set(rows.iter().zip(&noise).map(|(p, e)| p.iter().zip(e).map(|(x, y)| x + 0.1 * y).collect()).collect());
        let d = a.dim();
        let cube: Vec<Vec<f64>> = (0..1usize << d).map(|m| (0..d).map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 }).collect()).collect();
        let kappa = radius(&set(cube), &k);
        let gap = (radius(&a, &k) - radius(&b, &k)).abs();
        prop_assert!(gap <= kappa * hausdorff(&a, &b).unwrap() + 1e-7);
    }

    #[test]
    fn kernel_tables_are_diversities((k, rows) in (1usize..=3).prop_flat_map(|d| (kernel(d), coords(d, 2..=5)))) {
        let table = kernel_diversity(&set(rows), &k).unwrap();
        prop_assert!(check_axioms(&table).is_diversity);
    }
}

#[test]
fn validation_rejects_degenerate_polytopes() {
    assert!(Kernel::hpolytope(vec![vec![1.0, 0.0]], vec![1.0]).is_err());
    let segment = Kernel::hpolytope(
        vec![vec![0.0, 1.0], vec![0.0, -1.0], vec![1.0, 0.0], vec![-1.0, 0.0]],
        vec![0.0, 0.0, 1.0, 0.0],
    );
    assert!(segment.is_err());
}
