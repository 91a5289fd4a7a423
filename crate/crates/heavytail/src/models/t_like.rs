//! t-like variance mixture: X_k = G_k / sqrt(V_k / nu_k).
//!
//! Independent chi-square divisors give each coordinate its own dof nu_k,
//! with dependence through G ~ N(0, Q). Marginal k is sigma_k t(nu_k)
//! where Q_kk = sigma_k^2; finite variances require nu_k > 2.

use super::{DispersionMatrix, ModelError, Result};
use crate::dist::chi2_distribution;
use crate::rng::RngState;
use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, Gamma};

#[derive(Debug, Clone)]
pub struct TLikeModel {
    nus: Vec<f64>,
    sigmas: Vec<f64>,
    q: DispersionMatrix,
    root: DMatrix<f64>,
    chi2: Vec<Gamma<f64>>,
}

impl TLikeModel {
    /// Build from degrees of freedom and the Gaussian dispersion Q; the
    /// marginal scales are read off the diagonal, sigma_k = sqrt(Q_kk).
    pub fn new(nus: Vec<f64>, q: DispersionMatrix) -> Result<Self> {
        let d = nus.len();
        if d == 0 || q.dim() != d {
            return Err(ModelError::DimensionMismatch(format!(
                "nus ({}) and dispersion ({}) must agree",
                nus.len(),
                q.dim()
            )));
        }
        for (k, &nu) in nus.iter().enumerate() {
            if !(nu > 2.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "dof {k} must exceed 2 for a finite variance, got {nu}"
                )));
            }
        }
        let sigmas = (0..d)
            .map(|k| {
                let v = q.matrix()[(k, k)];
                if v > 0.0 {
                    Ok(v.sqrt())
                } else {
                    Err(ModelError::InvalidParameter(format!(
                        "diagonal Q_{k}{k} must be positive, got {v}"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let chi2 = nus
            .iter()
            .map(|&nu| chi2_distribution(nu).map_err(ModelError::from))
            .collect::<Result<Vec<_>>>()?;
        let root = q.sqrt();
        Ok(Self { nus, sigmas, q, root, chi2 })
    }

    pub fn dim(&self) -> usize {
        self.nus.len()
    }

    pub fn nus(&self) -> &[f64] {
        &self.nus
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn dispersion(&self) -> &DispersionMatrix {
        &self.q
    }

    pub fn sample_row(&self, rng: &mut RngState, out: &mut [f64]) {
        let d = self.dim();
        let z = DVector::from_fn(d, |_, _| rng.standard_normal());
        let g = &self.root * z;
        for k in 0..d {
            let v = self.chi2[k].sample(rng);
            out[k] = g[k] / (v / self.nus[k]).sqrt();
        }
    }

    /// n draws as the rows of an n x d matrix.
    pub fn sample(&self, n: usize, rng: &mut RngState) -> DMatrix<f64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(n, d);
        let mut row = vec![0.0; d];
        for i in 0..n {
            self.sample_row(rng, &mut row);
            for j in 0..d {
                out[(i, j)] = row[j];
            }
        }
        out
    }
}
