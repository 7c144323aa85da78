#![allow(dead_code)]

use circumdiv::{AffineMap, Kernel, PointSet};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PointSet {
    PointSet::from_coords((0..n).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<f64>>()))
        .expect("finite coordinates")
}

pub fn random_points_in(rng: &mut ChaCha8Rng, n: std::ops::RangeInclusive<usize>, d: usize) -> PointSet {
    let n = rng.gen_range(n);
    random_points(rng, n, d)
}

pub fn pick<'a>(rng: &mut ChaCha8Rng, options: &[&'a str]) -> &'a str {
    options[rng.gen_range(0..options.len())]
}

pub fn rows(set: &PointSet) -> Vec<Vec<f64>> {
    set.points().iter().map(|p| p.coords().to_vec()).collect()
}

/// A well-conditioned random square map: identity plus a small perturbation.
pub fn random_map(rng: &mut ChaCha8Rng, d: usize) -> AffineMap {
    let m = DMatrix::from_fn(d, d, |i, j| {
        let noise = rng.gen_range(-0.4..0.4);
        if i == j {
            rng.gen_range(0.8..1.6) + noise
        } else {
            noise
        }
    });
    let offset = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    AffineMap::new(m, offset).expect("square map")
}

/// The cube `[-1, 1]^d` with a few random cuts that keep the origin inside.
pub fn random_hpolytope(rng: &mut ChaCha8Rng, d: usize) -> Kernel {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut n = vec![0.0; d];
            n[i] = s;
            normals.push(n);
            offsets.push(rng.gen_range(0.5..1.5));
        }
    }
    for _ in 0..rng.gen_range(0..=3) {
        normals.push((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
        offsets.push(rng.gen_range(0.3..1.0));
    }
    Kernel::hpolytope(normals, offsets).expect("bounded with interior")
}

pub const VARIANTS: [&str; 7] = [
    "hpolytope",
    "ball",
    "parallelotope",
    "simplex_pos",
    "simplex_neg",
    "product",
    "affine_image",
];

pub fn random_kernel(rng: &mut ChaCha8Rng, variant: &str, d: usize) -> Kernel {
    match variant {
        "hpolytope" => random_hpolytope(rng, d),
        "ball" => Kernel::ball(d),
        "parallelotope" => Kernel::parallelotope(random_map(rng, d)).expect("nondegenerate"),
        "simplex_pos" => Kernel::simplex_pos(d),
        "simplex_neg" => Kernel::simplex_neg(d),
        "product" => {
            if d == 1 {
                return Kernel::simplex_pos(1);
            }
            let p = rng.gen_range(1..d);
            let v = pick(rng, &["simplex_pos", "ball", "parallelotope"]);
            let left = random_kernel(rng, v, p);
            let v = pick(rng, &["simplex_neg", "hpolytope", "ball"]);
            let right = random_kernel(rng, v, d - p);
            Kernel::product(left, right)
        }
        "affine_image" => {
            let v = pick(rng, &["simplex_neg", "ball", "hpolytope"]);
            let base = random_kernel(rng, v, d);
            Kernel::affine_image(random_map(rng, d), base).expect("nondegenerate")
        }
        other => panic!("unknown variant {other}"),
    }
}

pub fn any_kernel(rng: &mut ChaCha8Rng, d: usize) -> Kernel {
    let v = VARIANTS[rng.gen_range(0..VARIANTS.len())];
    random_kernel(rng, v, d)
}

/// Smallest enclosing ball by enumerating every support set of at most
/// `d + 1` points and keeping the smallest circumball that covers everything.
pub fn brute_force_meb(points: &[Vec<f64>]) -> f64 {
    let n = points.len();
    let d = points[0].len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if idx.len() > d + 1 {
            continue;
        }
        let Some(center) = circumcenter(&idx.iter().map(|&i| points[i].as_slice()).collect::<Vec<_>>()) else {
            continue;
        };
        let r = dist(&center, &points[idx[0]]);
        let scale = 1.0 + r;
        if points.iter().all(|p| dist(&center, p) <= r + 1e-12 * scale) {
            best = best.min(r);
        }
    }
    best
}

/// Center of the smallest ball through all given points (in their affine hull).
fn circumcenter(s: &[&[f64]]) -> Option<Vec<f64>> {
    let p0 = s[0];
    let k = s.len() - 1;
    if k == 0 {
        return Some(p0.to_vec());
    }
    let v: Vec<Vec<f64>> = s[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let g = DMatrix::from_fn(k, k, |i, j| 2.0 * dot(&v[i], &v[j]));
    let rhs = DVector::from_fn(k, |i, _| dot(&v[i], &v[i]));
    if g.determinant().abs() < 1e-12 {
        return None;
    }
    let t = g.lu().solve(&rhs)?;
    let mut c = p0.to_vec();
    for (j, vj) in v.iter().enumerate() {
        for (ci, x) in c.iter_mut().zip(vj) {
            *ci += t[j] * x;
        }
    }
    Some(c)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `|a − b| ≤ tol · max(|a|, |b|, 1)`.
pub fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Random metric on `n` points: Euclidean distances of random points in ℝ³, or
/// shortest paths of a random complete weighted graph.
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    if rng.gen_bool(0.5) {
        let p = rows(&random_points(rng, n, 3));
        DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { dist(&p[i], &p[j]) })
    } else {
        let mut m = DMatrix::from_fn(n, n, |_, _| 0.0);
        for i in 0..n {
            for j in i + 1..n {
                let w = rng.gen_range(0.1..3.0);
                m[(i, j)] = w;
                m[(j, i)] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = m[(i, k)] + m[(k, j)];
                    if via < m[(i, j)] {
                        m[(i, j)] = via;
                    }
                }
            }
        }
        m
    }
}
