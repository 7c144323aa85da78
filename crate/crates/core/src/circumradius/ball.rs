//! Minimal enclosing Euclidean ball, randomized move-to-front (Welzl/Gärtner).

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geomkit::euclidean;

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Smallest ball containing `points` (all of dimension `dim`). The input is
/// shuffled with `seed` before the move-to-front pass.
pub fn min_enclosing_ball(points: &[&[f64]], dim: usize, seed: u64) -> EnclosingBall {
    if points.is_empty() {
        return EnclosingBall {
            center: vec![0.0; dim],
            radius: 0.0,
        };
    }
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut support = Vec::with_capacity(dim + 1);
    let ctx = Ctx {
        points,
        dim,
        eps: 1e-12 * (1.0 + scale),
    };
    let end = order.len();
    let ball = ctx.mtf(&mut order, end, &mut support);
    let center = ball.map_or_else(|| points[0].to_vec(), |b| b.center);
    // Report the exact covering radius of the computed center.
    let radius = points
        .iter()
        .map(|p| euclidean(p, &center))
        .fold(0.0f64, f64::max);
    EnclosingBall { center, radius }
}

struct Ctx<'a> {
    points: &'a [&'a [f64]],
    dim: usize,
    eps: f64,
}

impl Ctx<'_> {
    fn mtf(
        &self,
        order: &mut Vec<usize>,
        end: usize,
        support: &mut Vec<usize>,
    ) -> Option<EnclosingBall> {
        let mut ball = (!support.is_empty()).then(|| self.circumball(support));
        if support.len() == self.dim + 1 {
            return ball;
        }
        for i in 0..end {
            let p = self.points[order[i]];
            let outside = match &ball {
                None => true,
                Some(b) => euclidean(p, &b.center) > b.radius + self.eps,
            };
            if outside {
                support.push(order[i]);
                ball = self.mtf(order, i, support);
                support.pop();
                order[..=i].rotate_right(1);
            }
        }
        ball
    }

    /// Smallest ball with all support points on its boundary (center in their affine hull).
    fn circumball(&self, support: &[usize]) -> EnclosingBall {
        let q0 = self.points[support[0]];
        let k = support.len() - 1;
        if k == 0 {
            return EnclosingBall {
                center: q0.to_vec(),
                radius: 0.0,
            };
        }
        let v = DMatrix::from_fn(k, self.dim, |i, j| self.points[support[i + 1]][j] - q0[j]);
        let gram = &v * v.transpose();
        let rhs = DVector::from_fn(k, |i, _| v.row(i).norm_squared() / 2.0);
        let alpha = match gram.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => {
                let svd = gram.svd(true, true);
                let tol = 1e-12 * svd.singular_values.max().max(1e-300);
                svd.solve(&rhs, tol).unwrap_or_else(|_| DVector::zeros(k))
            }
        };
        let offset = v.transpose() * alpha;
        let center: Vec<f64> = q0.iter().zip(offset.iter()).map(|(a, b)| a + b).collect();
        let radius = support
            .iter()
            .map(|&s| euclidean(self.points[s], &center))
            .fold(0.0f64, f64::max);
        EnclosingBall { center, radius }
    }
}
