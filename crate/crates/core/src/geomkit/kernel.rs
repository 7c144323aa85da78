use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::AffineMap;
use crate::error::{check_dim, Error, Result};
use crate::linprog::{self, LinearProgram, LpStatus};
use crate::tolerance::DEGENERACY;

/// A convex body used as the scaling shape of a circumradius.
///
/// The JSON form is internally tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    /// `{x : ⟨normals[i], x⟩ ≤ offsets[i]}`; must be bounded with nonempty interior.
    #[serde(rename = "hpolytope")]
    HPolytope {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    /// Euclidean unit ball centered at the origin.
    Ball { dim: usize },
    /// Image of the unit cube `[0,1]^d` under a non-degenerate affine map.
    Parallelotope { map: AffineMap },
    /// `conv(0, e_1, …, e_d)`.
    SimplexPos { dim: usize },
    /// `−conv(0, e_1, …, e_d) = {x ≤ 0 : Σx_i ≥ −1}`.
    SimplexNeg { dim: usize },
    /// `left × right`, coordinates of `left` first.
    Product { left: Box<Kernel>, right: Box<Kernel> },
    /// `map(base)` for a non-degenerate square map.
    AffineImage { map: AffineMap, base: Box<Kernel> },
}

impl Kernel {
    pub fn ball(dim: usize) -> Self {
        Kernel::Ball { dim }
    }

    pub fn simplex_pos(dim: usize) -> Self {
        Kernel::SimplexPos { dim }
    }

    pub fn simplex_neg(dim: usize) -> Self {
        Kernel::SimplexNeg { dim }
    }

    /// `[0,1]^dim` as a parallelotope with the identity map.
    pub fn unit_cube(dim: usize) -> Self {
        Kernel::Parallelotope {
            map: AffineMap::identity(dim),
        }
    }

    pub fn hpolytope(normals: Vec<Vec<f64>>, offsets: Vec<f64>) -> Result<Self> {
        let k = Kernel::HPolytope { normals, offsets };
        k.validate()?;
        Ok(k)
    }

    pub fn parallelotope(map: AffineMap) -> Result<Self> {
        let k = Kernel::Parallelotope { map };
        k.validate()?;
        Ok(k)
    }

    pub fn product(left: Kernel, right: Kernel) -> Self {
        Kernel::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Right-nested product of the given factors.
    pub fn product_of(mut factors: Vec<Kernel>) -> Option<Self> {
        let mut acc = factors.pop()?;
        while let Some(k) = factors.pop() {
            acc = Kernel::product(k, acc);
        }
        Some(acc)
    }

    pub fn affine_image(map: AffineMap, base: Kernel) -> Result<Self> {
        let k = Kernel::AffineImage {
            map,
            base: Box::new(base),
        };
        k.validate()?;
        Ok(k)
    }

    /// `factor · K`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::affine_image(AffineMap::scaling(self.dim(), factor), self.clone())
    }

    /// `K + v`.
    pub fn translated(&self, v: Vec<f64>) -> Result<Self> {
        check_dim(self.dim(), v.len())?;
        Self::affine_image(AffineMap::translation(v), self.clone())
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Kernel::HPolytope { .. } => "hpolytope",
            Kernel::Ball { .. } => "ball",
            Kernel::Parallelotope { .. } => "parallelotope",
            Kernel::SimplexPos { .. } => "simplex_pos",
            Kernel::SimplexNeg { .. } => "simplex_neg",
            Kernel::Product { .. } => "product",
            Kernel::AffineImage { .. } => "affine_image",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Kernel::HPolytope { normals, .. } => normals.first().map_or(0, Vec::len),
            Kernel::Ball { dim } | Kernel::SimplexPos { dim } | Kernel::SimplexNeg { dim } => *dim,
            Kernel::Parallelotope { map } => map.output_dim(),
            Kernel::Product { left, right } => left.dim() + right.dim(),
            Kernel::AffineImage { map, .. } => map.output_dim(),
        }
    }

    /// Checks that the kernel denotes a convex body.
    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::HPolytope { normals, offsets } => validate_hpolytope(normals, offsets),
            Kernel::Ball { dim } | Kernel::SimplexPos { dim } | Kernel::SimplexNeg { dim } => {
                if *dim == 0 {
                    Err(Error::InvalidKernel(format!("{} of dimension 0", self.type_name())))
                } else {
                    Ok(())
                }
            }
            Kernel::Parallelotope { map } => map.check_nondegenerate(),
            Kernel::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            Kernel::AffineImage { map, base } => {
                map.check_nondegenerate()?;
                base.validate()?;
                check_dim(map.input_dim(), base.dim())
            }
        }
    }

    /// Whether `p ∈ λK`, allowing `slack` in each defining inequality.
    pub fn contains_scaled(&self, p: &[f64], lambda: f64, slack: f64) -> bool {
        if p.len() != self.dim() {
            return false;
        }
        match self {
            Kernel::HPolytope { normals, offsets } => normals
                .iter()
                .zip(offsets)
                .all(|(h, c)| dot(h, p) <= lambda * c + slack),
            Kernel::Ball { .. } => norm(p) <= lambda + slack,
            Kernel::SimplexPos { .. } => {
                p.iter().all(|&v| v >= -slack) && p.iter().sum::<f64>() <= lambda + slack
            }
            Kernel::SimplexNeg { .. } => {
                p.iter().all(|&v| v <= slack) && p.iter().sum::<f64>() >= -lambda - slack
            }
            Kernel::Parallelotope { map } => match pull_back(map, p, lambda) {
                Some(y) => y.iter().all(|&v| v >= -slack && v <= lambda + slack),
                None => false,
            },
            Kernel::Product { left, right } => {
                let (a, b) = p.split_at(left.dim());
                left.contains_scaled(a, lambda, slack) && right.contains_scaled(b, lambda, slack)
            }
            Kernel::AffineImage { map, base } => match pull_back(map, p, lambda) {
                Some(y) => base.contains_scaled(&y, lambda, slack),
                None => false,
            },
        }
    }

    /// Some point of `K` (an interior point for every variant except the simplices,
    /// where the origin vertex is returned).
    pub fn reference_point(&self) -> Result<Vec<f64>> {
        Ok(match self {
            Kernel::HPolytope { normals, offsets } => chebyshev_center(normals, offsets)?.0,
            Kernel::Ball { dim } | Kernel::SimplexPos { dim } | Kernel::SimplexNeg { dim } => {
                vec![0.0; *dim]
            }
            Kernel::Parallelotope { map } => map.apply(&vec![0.5; map.input_dim()]),
            Kernel::Product { left, right } => {
                let mut v = left.reference_point()?;
                v.extend(right.reference_point()?);
                v
            }
            Kernel::AffineImage { map, base } => map.apply(&base.reference_point()?),
        })
    }

    /// A maximizer of `⟨u, x⟩` over `K`.
    pub fn support_point(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), u.len())?;
        Ok(match self {
            Kernel::HPolytope { normals, offsets } => {
                let mut lp = LinearProgram::minimize(u.iter().map(|v| -v).collect());
                for (h, c) in normals.iter().zip(offsets) {
                    lp.push_leq(h.clone(), *c);
                }
                let res = linprog::solve(&lp)?;
                res.solution.ok_or_else(|| {
                    Error::InvalidKernel(format!("support LP ended {:?}", res.status))
                })?
            }
            Kernel::Ball { dim } => {
                let n = norm(u);
                if n == 0.0 {
                    vec![0.0; *dim]
                } else {
                    u.iter().map(|v| v / n).collect()
                }
            }
            Kernel::SimplexPos { dim } => {
                let mut x = vec![0.0; *dim];
                if let Some((i, &m)) = argmax(u) {
                    if m > 0.0 {
                        x[i] = 1.0;
                    }
                }
                x
            }
            Kernel::SimplexNeg { dim } => {
                let mut x = vec![0.0; *dim];
                let neg: Vec<f64> = u.iter().map(|v| -v).collect();
                if let Some((i, &m)) = argmax(&neg) {
                    if m > 0.0 {
                        x[i] = -1.0;
                    }
                }
                x
            }
            Kernel::Parallelotope { map } => {
                let mtu = transpose_apply(map, u);
                let y: Vec<f64> = mtu.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect();
                map.apply(&y)
            }
            Kernel::Product { left, right } => {
                let (a, b) = u.split_at(left.dim());
                let mut x = left.support_point(a)?;
                x.extend(right.support_point(b)?);
                x
            }
            Kernel::AffineImage { map, base } => {
                map.apply(&base.support_point(&transpose_apply(map, u))?)
            }
        })
    }

    /// Inequality description `(normals, offsets)` for polytope variants; `None`
    /// when the kernel involves a ball.
    pub fn h_representation(&self) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
        match self {
            Kernel::HPolytope { normals, offsets } => Some((normals.clone(), offsets.clone())),
            Kernel::Ball { .. } => None,
            Kernel::SimplexPos { dim } => {
                let d = *dim;
                let mut normals: Vec<Vec<f64>> = (0..d).map(|i| unit(d, i, -1.0)).collect();
                let mut offsets = vec![0.0; d];
                normals.push(vec![1.0; d]);
                offsets.push(1.0);
                Some((normals, offsets))
            }
            Kernel::SimplexNeg { dim } => {
                let d = *dim;
                let mut normals: Vec<Vec<f64>> = (0..d).map(|i| unit(d, i, 1.0)).collect();
                let mut offsets = vec![0.0; d];
                normals.push(vec![-1.0; d]);
                offsets.push(1.0);
                Some((normals, offsets))
            }
            Kernel::Parallelotope { map } => {
                let inv = map.inverse().ok()?;
                let t = map.offset();
                let mut normals = Vec::new();
                let mut offsets = Vec::new();
                for r in inv.rows() {
                    let rt = dot(&r, t);
                    normals.push(r.clone());
                    offsets.push(1.0 + rt);
                    normals.push(r.iter().map(|v| -v).collect());
                    offsets.push(-rt);
                }
                Some((normals, offsets))
            }
            Kernel::Product { left, right } => {
                let (ln, lo) = left.h_representation()?;
                let (rn, ro) = right.h_representation()?;
                let (p, q) = (left.dim(), right.dim());
                let mut normals: Vec<Vec<f64>> = ln
                    .into_iter()
                    .map(|mut h| {
                        h.resize(p + q, 0.0);
                        h
                    })
                    .collect();
                normals.extend(rn.into_iter().map(|h| {
                    let mut v = vec![0.0; p];
                    v.extend(h);
                    v
                }));
                Some((normals, lo.into_iter().chain(ro).collect()))
            }
            Kernel::AffineImage { map, base } => {
                let (bn, bo) = base.h_representation()?;
                let inv = map.inverse().ok()?;
                let t = map.offset();
                let mut normals = Vec::with_capacity(bn.len());
                let mut offsets = Vec::with_capacity(bn.len());
                for (h, c) in bn.iter().zip(bo) {
                    // h·M⁻¹(x − t) ≤ c
                    let g = transpose_apply(&inv, h);
                    offsets.push(c + dot(&g, t));
                    normals.push(g);
                }
                Some((normals, offsets))
            }
        }
    }

    /// The same body as an explicit [`Kernel::HPolytope`], when it is a polytope.
    pub fn to_hpolytope(&self) -> Option<Kernel> {
        self.h_representation()
            .map(|(normals, offsets)| Kernel::HPolytope { normals, offsets })
    }

    /// Vertex set for the variants whose vertices are known in closed form.
    pub fn vertices(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            Kernel::HPolytope { .. } | Kernel::Ball { .. } => None,
            Kernel::SimplexPos { dim } => {
                let mut v = vec![vec![0.0; *dim]];
                v.extend((0..*dim).map(|i| unit(*dim, i, 1.0)));
                Some(v)
            }
            Kernel::SimplexNeg { dim } => {
                let mut v = vec![vec![0.0; *dim]];
                v.extend((0..*dim).map(|i| unit(*dim, i, -1.0)));
                Some(v)
            }
            Kernel::Parallelotope { map } => {
                let d = map.input_dim();
                if d > 20 {
                    return None;
                }
                Some(
                    (0u64..1 << d)
                        .map(|mask| {
                            let y: Vec<f64> = (0..d).map(|i| (mask >> i & 1) as f64).collect();
                            map.apply(&y)
                        })
                        .collect(),
                )
            }
            Kernel::Product { left, right } => {
                let l = left.vertices()?;
                let r = right.vertices()?;
                Some(
                    l.iter()
                        .flat_map(|a| {
                            r.iter().map(move |b| {
                                let mut v = a.clone();
                                v.extend_from_slice(b);
                                v
                            })
                        })
                        .collect(),
                )
            }
            Kernel::AffineImage { map, base } => {
                Some(base.vertices()?.iter().map(|v| map.apply(v)).collect())
            }
        }
    }
}

fn validate_hpolytope(normals: &[Vec<f64>], offsets: &[f64]) -> Result<()> {
    if normals.is_empty() {
        return Err(Error::InvalidKernel("hpolytope without facets".into()));
    }
    if normals.len() != offsets.len() {
        return Err(Error::InvalidKernel(format!(
            "{} normals but {} offsets",
            normals.len(),
            offsets.len()
        )));
    }
    let d = normals[0].len();
    if d == 0 {
        return Err(Error::InvalidKernel("hpolytope of dimension 0".into()));
    }
    for h in normals {
        check_dim(d, h.len())?;
    }
    if normals.iter().flatten().chain(offsets).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("hpolytope"));
    }
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut lp = LinearProgram::minimize(unit(d, i, -sign));
            for (h, c) in normals.iter().zip(offsets) {
                lp.push_leq(h.clone(), *c);
            }
            match linprog::solve(&lp)?.status {
                LpStatus::Optimal => {}
                LpStatus::Unbounded => {
                    return Err(Error::InvalidKernel(format!(
                        "hpolytope is unbounded in direction {}e_{}",
                        if sign > 0.0 { "+" } else { "-" },
                        i + 1
                    )))
                }
                LpStatus::Infeasible => {
                    return Err(Error::InvalidKernel("hpolytope is empty".into()))
                }
            }
        }
    }
    let (_, radius) = chebyshev_center(normals, offsets)?;
    if radius <= DEGENERACY {
        return Err(Error::InvalidKernel(format!(
            "hpolytope has empty interior (inradius {radius:e})"
        )));
    }
    Ok(())
}

/// Center and radius of the largest inscribed ball (radius capped at 1).
fn chebyshev_center(normals: &[Vec<f64>], offsets: &[f64]) -> Result<(Vec<f64>, f64)> {
    let d = normals[0].len();
    let mut objective = vec![0.0; d + 1];
    objective[d] = -1.0;
    let mut lp = LinearProgram::minimize(objective).with_upper(d, 1.0);
    for (h, c) in normals.iter().zip(offsets) {
        let mut row = h.clone();
        row.push(norm(h));
        lp.push_leq(row, *c);
    }
    let res = linprog::solve(&lp)?;
    match res.solution {
        Some(mut x) => {
            let r = x.pop().unwrap_or(0.0);
            Ok((x, r))
        }
        None => Err(Error::InvalidKernel(format!(
            "hpolytope interior LP ended {:?}",
            res.status
        ))),
    }
}

/// `M⁻¹(p − λt)` for the map `x ↦ Mx + t`.
fn pull_back(map: &AffineMap, p: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let shifted: Vec<f64> = p.iter().zip(map.offset()).map(|(a, t)| a - lambda * t).collect();
    let lu = map.matrix().clone().lu();
    lu.solve(&DVector::from_vec(shifted))
        .map(|v| v.iter().copied().collect())
}

fn transpose_apply(map: &AffineMap, u: &[f64]) -> Vec<f64> {
    let m: &DMatrix<f64> = map.matrix();
    (m.transpose() * DVector::from_column_slice(u))
        .iter()
        .copied()
        .collect()
}

fn argmax(v: &[f64]) -> Option<(usize, &f64)> {
    v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn unit(d: usize, i: usize, value: f64) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = value;
    v
}
