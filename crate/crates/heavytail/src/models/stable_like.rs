//! Stable-like variance mixture: X = A^{1/2} G.
//!
//! A is a diagonal matrix of independent positive stable subordinators,
//! one per coordinate, so each risk factor carries its own tail index
//! alpha_i in (1, 2) while dependence enters only through the Gaussian
//! component G ~ N(0, Q). Marginal i is S_{alpha_i}(sigma_i, 0, 0) with
//! Q_ii = 2 sigma_i^2.

use super::{DispersionMatrix, ModelError, Result};
use crate::dist::subordinator_sample;
use crate::rng::RngState;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct StableLikeModel {
    alphas: Vec<f64>,
    sigmas: Vec<f64>,
    q: DispersionMatrix,
    root: DMatrix<f64>,
}

impl StableLikeModel {
    /// Build from marginal parameters and the Gaussian dispersion Q.
    /// Q must carry the marginal scales on its diagonal: Q_ii = 2 sigma_i^2.
    pub fn new(alphas: Vec<f64>, sigmas: Vec<f64>, q: DispersionMatrix) -> Result<Self> {
        let d = alphas.len();
        if d == 0 || sigmas.len() != d || q.dim() != d {
            return Err(ModelError::DimensionMismatch(format!(
                "alphas ({}), sigmas ({}) and dispersion ({}) must agree",
                alphas.len(),
                sigmas.len(),
                q.dim()
            )));
        }
        for (i, &a) in alphas.iter().enumerate() {
            if !(a > 1.0 && a < 2.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "tail index {i} must lie strictly inside (1, 2), got {a}"
                )));
            }
        }
        for (i, &s) in sigmas.iter().enumerate() {
            if !(s > 0.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "scale {i} must be positive, got {s}"
                )));
            }
            let want = 2.0 * s * s;
            let got = q.matrix()[(i, i)];
            if (got - want).abs() > 1e-6 * want.max(1.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "diagonal Q_{i}{i} = {got} must equal 2 sigma_{i}^2 = {want}"
                )));
            }
        }
        let root = q.sqrt();
        Ok(Self { alphas, sigmas, q, root })
    }

    /// Build from marginal parameters and the correlation matrix of the
    /// Gaussian component; the diagonal scaling 2 sigma_i^2 is applied here.
    pub fn from_correlation(
        alphas: Vec<f64>,
        sigmas: Vec<f64>,
        corr: &DMatrix<f64>,
    ) -> Result<Self> {
        let d = alphas.len();
        if corr.nrows() != d || corr.ncols() != d {
            return Err(ModelError::DimensionMismatch(
                "correlation dimension must match the marginals".into(),
            ));
        }
        let mut q = corr.clone();
        for i in 0..d {
            for j in 0..d {
                q[(i, j)] *= 2.0 * sigmas[i] * sigmas[j];
            }
        }
        Self::new(alphas, sigmas, DispersionMatrix::new(q)?)
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn dispersion(&self) -> &DispersionMatrix {
        &self.q
    }

    pub fn sample_row(&self, rng: &mut RngState, out: &mut [f64]) -> Result<()> {
        let d = self.dim();
        let z = DVector::from_fn(d, |_, _| rng.standard_normal());
        let g = &self.root * z;
        for i in 0..d {
            let a = subordinator_sample(rng, self.alphas[i])?;
            out[i] = a.sqrt() * g[i];
        }
        Ok(())
    }

    /// n draws as the rows of an n x d matrix:
    /// row = A^{1/2} Q^{1/2} Z with fresh subordinators and Gaussians.
    pub fn sample(&self, n: usize, rng: &mut RngState) -> Result<DMatrix<f64>> {
        let d = self.dim();
        let mut out = DMatrix::zeros(n, d);
        let mut row = vec![0.0; d];
        for i in 0..n {
            self.sample_row(rng, &mut row)?;
            for j in 0..d {
                out[(i, j)] = row[j];
            }
        }
        Ok(out)
    }
}
