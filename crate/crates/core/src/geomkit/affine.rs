use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Point;
use crate::error::{check_dim, Error, Result};
use crate::tolerance::DEGENERACY;

/// `x ↦ Mx + t` with `M` a `d'×d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    matrix: DMatrix<f64>,
    offset: Vec<f64>,
}

impl AffineMap {
    pub fn new(matrix: DMatrix<f64>, offset: Vec<f64>) -> Result<Self> {
        check_dim(matrix.nrows(), offset.len())?;
        if matrix.ncols() == 0 {
            return Err(Error::Empty("affine map"));
        }
        if matrix.iter().chain(offset.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("affine map"));
        }
        Ok(Self { matrix, offset })
    }

    /// Builds a map from row-major rows.
    pub fn from_rows(rows: &[Vec<f64>], offset: Vec<f64>) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(Error::Empty("affine map rows"));
        }
        let ncols = rows[0].len();
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                got: r.len(),
            });
        }
        let matrix = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
        Self::new(matrix, offset)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            offset: vec![0.0; dim],
        }
    }

    pub fn scaling(dim: usize, factor: f64) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim) * factor,
            offset: vec![0.0; dim],
        }
    }

    pub fn translation(offset: Vec<f64>) -> Self {
        let d = offset.len();
        Self {
            matrix: DMatrix::identity(d, d),
            offset,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn input_dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix.row(i).iter().copied().collect())
            .collect()
    }

    pub fn determinant(&self) -> Option<f64> {
        self.matrix.is_square().then(|| self.matrix.determinant())
    }

    /// Square with `|det| > DEGENERACY`.
    pub fn check_nondegenerate(&self) -> Result<()> {
        match self.determinant() {
            None => Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                got: self.matrix.ncols(),
            }),
            Some(det) if det.abs() <= DEGENERACY => Err(Error::DegenerateMap { det }),
            Some(_) => Ok(()),
        }
    }

    /// `Mx`.
    pub fn apply_linear(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.input_dim());
        (self.matrix.clone() * DVector::from_column_slice(x))
            .iter()
            .copied()
            .collect()
    }

    /// `Mx + t`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.apply_linear(x);
        y.iter_mut().zip(&self.offset).for_each(|(a, b)| *a += b);
        y
    }

    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        check_dim(self.input_dim(), p.dim())?;
        Point::new(self.apply(p.coords()))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.check_nondegenerate()?;
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or(Error::DegenerateMap { det: 0.0 })?;
        let t = -(&inv * DVector::from_column_slice(&self.offset));
        Ok(Self {
            matrix: inv,
            offset: t.iter().copied().collect(),
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dim(self.input_dim(), other.output_dim())?;
        let offset = self.apply(&other.offset);
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            offset,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct AffineMapRepr {
    matrix: Vec<Vec<f64>>,
    offset: Vec<f64>,
}

impl Serialize for AffineMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AffineMapRepr {
            matrix: self.rows(),
            offset: self.offset.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AffineMapRepr::deserialize(d)?;
        AffineMap::from_rows(&r.matrix, r.offset).map_err(serde::de::Error::custom)
    }
}
