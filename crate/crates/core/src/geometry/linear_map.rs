use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A linear map `R^cols -> R^rows`, stored as a dense matrix.
///
/// Distances between maps use the Frobenius norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LinearMapRepr", into = "LinearMapRepr")]
pub struct LinearMap(DMatrix<f64>);

#[derive(Serialize, Deserialize)]
struct LinearMapRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<LinearMapRepr> for LinearMap {
    type Error = Error;

    fn try_from(r: LinearMapRepr) -> Result<Self> {
        let map = LinearMap::from_rows(&r.entries)?;
        if map.rows() != r.rows || map.cols() != r.cols {
            return Err(Error::dim(
                format!("{}x{}", r.rows, r.cols),
                format!("{}x{}", map.rows(), map.cols()),
            ));
        }
        Ok(map)
    }
}

impl From<LinearMap> for LinearMapRepr {
    fn from(m: LinearMap) -> Self {
        LinearMapRepr {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows(),
        }
    }
}

impl LinearMap {
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::Argument("linear map needs at least one row and column".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("linear map entries must be finite".into()));
        }
        Ok(LinearMap(m))
    }

    /// Builds a map from row-major nested rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Argument("ragged matrix rows".into()));
        }
        Self::from_matrix(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(rows * cols, data.len()));
        }
        Self::from_matrix(DMatrix::from_row_slice(rows, cols, data))
    }

    pub fn scalar(v: f64) -> Self {
        LinearMap(DMatrix::from_element(1, 1, v))
    }

    /// An `n x 1` map, the form in which vectors of `R^n` enter operator sets.
    pub fn column(v: &[f64]) -> Self {
        LinearMap(DMatrix::from_column_slice(v.len(), 1, v))
    }

    /// A `1 x n` map (a linear functional).
    pub fn row(v: &[f64]) -> Self {
        LinearMap(DMatrix::from_row_slice(1, v.len(), v))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        LinearMap(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        LinearMap(DMatrix::identity(n, n))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    /// Row-major flattening, used to treat maps as points of `R^(rows*cols)`.
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn column_vec(&self, j: usize) -> Vec<f64> {
        self.0.column(j).iter().copied().collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols(), "apply: vector length must equal cols");
        let v = &self.0 * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if self.cols() != inner.rows() {
            return Err(Error::dim(
                format!("inner with {} rows", self.cols()),
                format!("{} rows", inner.rows()),
            ));
        }
        Ok(LinearMap(&self.0 * &inner.0))
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check_same_shape(other)?;
        Ok(LinearMap(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap> {
        self.check_same_shape(other)?;
        Ok(LinearMap(&self.0 - &other.0))
    }

    pub fn scale(&self, s: f64) -> LinearMap {
        LinearMap(&self.0 * s)
    }

    /// Stacks `self` on top of `below` (block rows).
    pub fn stack(&self, below: &LinearMap) -> Result<LinearMap> {
        if self.cols() != below.cols() {
            return Err(Error::dim(self.cols(), below.cols()));
        }
        let m = self.rows() + below.rows();
        let top = self.rows();
        Ok(LinearMap(DMatrix::from_fn(m, self.cols(), |i, j| {
            if i < top {
                self.0[(i, j)]
            } else {
                below.0[(i - top, j)]
            }
        })))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn distance(&self, other: &LinearMap) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok((&self.0 - &other.0).norm())
    }

    pub fn check_same_shape(&self, other: &LinearMap) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::dim(
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_apply_agree() {
        let a = LinearMap::from_rows(&[vec![1.0, 2.0], vec![0.0, -1.0]]).unwrap();
        let b = LinearMap::from_rows(&[vec![3.0], vec![4.0]]).unwrap();
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.column_vec(0), a.apply(&b.column_vec(0)));
        assert!(b.compose(&b).is_err());
    }

    #[test]
    fn serde_roundtrip_keeps_shape() {
        let a = LinearMap::row(&[1.0, -1.0]);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"rows\":1"));
        let back: LinearMap = serde_json::from_str(&s).unwrap();
        assert_eq!(a, back);
        let bad = r#"{"rows":2,"cols":2,"entries":[[1.0,2.0]]}"#;
        assert!(serde_json::from_str::<LinearMap>(bad).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(LinearMap::from_rows(&[vec![f64::NAN]]).is_err());
        assert!(LinearMap::from_rows(&[]).is_err());
    }
}
