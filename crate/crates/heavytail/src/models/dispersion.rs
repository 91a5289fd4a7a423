//! Symmetric positive semi-definite dispersion matrices.
//!
//! One type covers both uses in the model families: the covariance of the
//! Gaussian component (general diagonal) and the unit-diagonal copula
//! dispersion of the meta models. Estimated matrices are not guaranteed
//! PSD, so a clipping repair is provided and its size reported.

use super::{ModelError, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Tolerance below which a negative eigenvalue is treated as rounding noise.
const PSD_SLACK: f64 = 1e-10;
/// Floor applied to eigenvalues during repair.
const CLIP_FLOOR: f64 = 1e-8;

/// Symmetric PSD dispersion matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct DispersionMatrix {
    m: DMatrix<f64>,
}

impl DispersionMatrix {
    /// Validating constructor: symmetric (to rounding) and PSD
    /// (minimum eigenvalue >= -1e-10 relative to the spectral scale).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(ModelError::DimensionMismatch(
                "dispersion matrix must be square and non-empty".into(),
            ));
        }
        let scale = m.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1.0);
        for i in 0..m.nrows() {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale {
                    return Err(ModelError::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
            if !m[(i, i)].is_finite() {
                return Err(ModelError::InvalidParameter("non-finite entries".into()));
            }
        }
        let sym = 0.5 * (&m + m.transpose());
        let min_eig = sym
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_SLACK * scale {
            return Err(ModelError::Dist(crate::dist::DistError::NotPsd { min_eig }));
        }
        Ok(Self { m: sym })
    }

    /// Identity dispersion.
    pub fn identity(d: usize) -> Self {
        Self { m: DMatrix::identity(d, d) }
    }

    /// Nearest-PSD repair by eigenvalue clipping, optionally renormalizing
    /// to unit diagonal afterwards. Returns the repaired matrix together
    /// with the max-abs perturbation applied to the input.
    pub fn repair(raw: &DMatrix<f64>, unit_diagonal: bool) -> Result<(Self, f64)> {
        if raw.nrows() != raw.ncols() || raw.nrows() == 0 {
            return Err(ModelError::DimensionMismatch(
                "dispersion matrix must be square and non-empty".into(),
            ));
        }
        let sym = 0.5 * (raw + raw.transpose());
        let eig = sym.clone().symmetric_eigen();
        let mut vals = eig.eigenvalues.clone();
        for v in vals.iter_mut() {
            *v = v.max(CLIP_FLOOR);
        }
        let mut fixed = &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose();
        if unit_diagonal {
            let d = fixed.nrows();
            let scales: Vec<f64> = (0..d).map(|i| fixed[(i, i)].sqrt()).collect();
            for i in 0..d {
                for j in 0..d {
                    fixed[(i, j)] /= scales[i] * scales[j];
                }
            }
        }
        let perturbation = (&fixed - raw).iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        Ok((Self { m: 0.5 * (&fixed + fixed.transpose()) }, perturbation))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn is_unit_diagonal(&self) -> bool {
        (0..self.dim()).all(|i| (self.m[(i, i)] - 1.0).abs() <= 1e-8)
    }

    /// Symmetric PSD square root.
    pub fn sqrt(&self) -> DMatrix<f64> {
        crate::dist::symmetric_sqrt(&self.m).expect("validated PSD matrix")
    }

    /// Inverse; fails on numerically singular input.
    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.m.clone().try_inverse().ok_or(ModelError::SingularDispersion)
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant()
    }
}

/// JSON shape: dimension plus row-major entries.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    rows: Vec<f64>,
}

impl TryFrom<MatrixRepr> for DispersionMatrix {
    type Error = String;
    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        if r.rows.len() != r.dim * r.dim {
            return Err(format!(
                "matrix payload has {} entries, expected {}",
                r.rows.len(),
                r.dim * r.dim
            ));
        }
        DispersionMatrix::new(DMatrix::from_row_slice(r.dim, r.dim, &r.rows))
            .map_err(|e| e.to_string())
    }
}

impl From<DispersionMatrix> for MatrixRepr {
    fn from(m: DispersionMatrix) -> Self {
        let dim = m.dim();
        let rows = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| m.m[(i, j)])
            .collect();
        MatrixRepr { dim, rows }
    }
}
