//! Meta-stable law: stable marginals under an elliptical stable copula.
//!
//! A sub-Gaussian alpha0-stable vector X' = A^{1/2} G is pushed through its
//! own marginal distribution function and back through the target stable
//! quantiles: X_k = sigma_k F_{alpha_k}^{-1}(F(X'_k)). With unit-diagonal Q
//! the standardized driver is sqrt(A) * N(0, 2Q), whose marginals are
//! exactly S_{alpha0}(1, 0, 0), so the standard distribution function
//! applies. At alpha0 = 2 the subordinator degenerates and the copula stage
//! reduces structurally to the Gaussian transform Phi(G_k) — the stable
//! grid is never consulted for it.

use super::{DispersionMatrix, ModelError, Result};
use crate::dist::{normal_cdf, normal_quantile, subordinator_sample, StableGrid};
use crate::rng::RngState;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct MetaStableModel {
    alpha0: f64,
    alphas: Vec<f64>,
    sigmas: Vec<f64>,
    q: DispersionMatrix,
    /// square root of 2Q: the Gaussian leg of the standardized driver
    root2q: DMatrix<f64>,
}

impl MetaStableModel {
    /// `alpha0 = 2` selects the degenerate Gaussian-copula variant.
    /// Marginal indices may equal 2 (Gaussian marginals); Q must be a
    /// unit-diagonal dispersion matrix.
    pub fn new(
        alpha0: f64,
        alphas: Vec<f64>,
        sigmas: Vec<f64>,
        q: DispersionMatrix,
    ) -> Result<Self> {
        let d = alphas.len();
        if d == 0 || sigmas.len() != d || q.dim() != d {
            return Err(ModelError::DimensionMismatch(format!(
                "alphas ({}), sigmas ({}) and dispersion ({}) must agree",
                alphas.len(),
                sigmas.len(),
                q.dim()
            )));
        }
        if !(alpha0 > 1.0 && alpha0 <= 2.0) {
            return Err(ModelError::InvalidParameter(format!(
                "copula index must lie in (1, 2], got {alpha0}"
            )));
        }
        for (k, &a) in alphas.iter().enumerate() {
            if !(a > 1.0 && a <= 2.0) {
                return Err(ModelError::InvalidParameter(format!(
                    "marginal index {k} must lie in (1, 2], got {a}"
                )));
            }
        }
        if sigmas.iter().any(|&s| !(s > 0.0)) {
            return Err(ModelError::InvalidParameter("scales must be positive".into()));
        }
        if !q.is_unit_diagonal() {
            return Err(ModelError::InvalidParameter(
                "meta models require a unit-diagonal dispersion matrix".into(),
            ));
        }
        let root2q = DispersionMatrix::new(2.0 * q.matrix())?.sqrt();
        Ok(Self { alpha0, alphas, sigmas, q, root2q })
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha0 == 2.0
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

    fn check_grid(&self, grid: &StableGrid) -> Result<()> {
        if self.alpha0 < 2.0 && !grid.covers(self.alpha0) {
            return Err(ModelError::Dist(crate::dist::DistError::GridCoverage {
                alpha: self.alpha0,
                lo: grid.spec().alpha_lo,
                hi: grid.spec().alpha_hi,
            }));
        }
        for &a in &self.alphas {
            if a < 2.0 && !grid.covers(a) {
                return Err(ModelError::Dist(crate::dist::DistError::GridCoverage {
                    alpha: a,
                    lo: grid.spec().alpha_lo,
                    hi: grid.spec().alpha_hi,
                }));
            }
        }
        Ok(())
    }

    pub fn sample_row(&self, rng: &mut RngState, grid: &StableGrid, out: &mut [f64]) -> Result<()> {
        let d = self.dim();
        let z = DVector::from_fn(d, |_, _| rng.standard_normal());
        let y = &self.root2q * z; // N(0, 2Q)
        let sqrt_a = if self.alpha0 < 2.0 {
            subordinator_sample(rng, self.alpha0)?.sqrt()
        } else {
            1.0
        };
        for k in 0..d {
            let u = if self.alpha0 < 2.0 {
                grid.cdf(self.alpha0, sqrt_a * y[k])?
            } else {
                // degenerate case: Gaussian copula of G = y / sqrt(2)
                normal_cdf(y[k] / std::f64::consts::SQRT_2)
            };
            let u = u.clamp(1e-15, 1.0 - 1e-15);
            let a_k = self.alphas[k];
            let x = if a_k < 2.0 {
                grid.quantile(a_k, u)?
            } else {
                std::f64::consts::SQRT_2 * normal_quantile(u)
            };
            out[k] = self.sigmas[k] * x;
        }
        Ok(())
    }

    /// n draws as the rows of an n x d matrix.
    pub fn sample(&self, n: usize, rng: &mut RngState, grid: &StableGrid) -> Result<DMatrix<f64>> {
        self.check_grid(grid)?;
        let d = self.dim();
        let mut out = DMatrix::zeros(n, d);
        let mut row = vec![0.0; d];
        for i in 0..n {
            self.sample_row(rng, grid, &mut row)?;
            for j in 0..d {
                out[(i, j)] = row[j];
            }
        }
        Ok(out)
    }
}
