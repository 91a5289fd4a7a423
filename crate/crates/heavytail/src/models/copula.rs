//! Copula densities of the meta families.
//!
//! These are the likelihood kernels for the dependence parameter: the
//! observations are first pushed to the unit cube with the fitted marginals,
//! and the copula parameter (nu0 or alpha0) is scored against these
//! densities. Each evaluator pre-computes everything that does not depend
//! on the data point. The Gaussian copula doubles as the degenerate
//! endpoint (nu0 = infinity, alpha0 = 2) of both families.

use super::subgaussian::SubGaussianDensity;
use super::{DispersionMatrix, ModelError, Result};
use crate::dist::{normal_quantile, StableGrid, StablePdfTable, StudentMarginal};
use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

fn check_unit_cube(u: &[f64], d: usize) -> Result<()> {
    if u.len() != d {
        return Err(ModelError::DimensionMismatch(format!(
            "point has {} coordinates, expected {}",
            u.len(),
            d
        )));
    }
    if u.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
        return Err(ModelError::InvalidParameter(
            "copula arguments must lie strictly inside (0, 1)".into(),
        ));
    }
    Ok(())
}

fn quad_form(m: &DMatrix<f64>, x: &[f64]) -> f64 {
    let d = x.len();
    let mut z = 0.0;
    for i in 0..d {
        for j in 0..d {
            z += x[i] * m[(i, j)] * x[j];
        }
    }
    z
}

/// Gaussian copula density with dispersion Q (unit diagonal).
#[derive(Debug, Clone)]
pub struct GaussianCopula {
    d: usize,
    q_inv: DMatrix<f64>,
    ln_det: f64,
}

impl GaussianCopula {
    pub fn new(q: &DispersionMatrix) -> Result<Self> {
        let det = q.determinant();
        if !(det > 1e-300) {
            return Err(ModelError::SingularDispersion);
        }
        Ok(Self { d: q.dim(), q_inv: q.inverse()?, ln_det: det.ln() })
    }

    pub fn ln_density(&self, u: &[f64]) -> Result<f64> {
        check_unit_cube(u, self.d)?;
        let x: Vec<f64> = u.iter().map(|&v| normal_quantile(v)).collect();
        Ok(self.ln_density_from_quantiles(&x))
    }

    /// Density expressed in the already-transformed normal scores.
    pub fn ln_density_from_quantiles(&self, x: &[f64]) -> f64 {
        let q = quad_form(&self.q_inv, x);
        let plain: f64 = x.iter().map(|v| v * v).sum();
        -0.5 * self.ln_det - 0.5 * (q - plain)
    }
}

/// t-copula density with `nu0` degrees of freedom and dispersion Q.
#[derive(Debug, Clone)]
pub struct MetaTCopula {
    nu0: f64,
    d: usize,
    q_inv: DMatrix<f64>,
    ln_const: f64,
    t0: StudentMarginal,
}

impl MetaTCopula {
    pub fn new(nu0: f64, q: &DispersionMatrix) -> Result<Self> {
        if !(nu0 > 2.0) || !nu0.is_finite() {
            return Err(ModelError::InvalidParameter(format!(
                "copula dof must be finite and exceed 2, got {nu0}"
            )));
        }
        let det = q.determinant();
        if !(det > 1e-300) {
            return Err(ModelError::SingularDispersion);
        }
        let d = q.dim();
        let df = d as f64;
        let ln_const = -0.5 * det.ln() + ln_gamma((nu0 + df) / 2.0)
            + (df - 1.0) * ln_gamma(nu0 / 2.0)
            - df * ln_gamma((nu0 + 1.0) / 2.0);
        Ok(Self { nu0, d, q_inv: q.inverse()?, ln_const, t0: StudentMarginal::new(nu0)? })
    }

    pub fn ln_density(&self, u: &[f64]) -> Result<f64> {
        check_unit_cube(u, self.d)?;
        let x: Vec<f64> = u.iter().map(|&v| self.t0.quantile(v)).collect();
        Ok(self.ln_density_from_quantiles(&x))
    }

    /// Density expressed in the already-transformed t scores
    /// (the u_k have been mapped through the nu0 quantile).
    pub fn ln_density_from_quantiles(&self, x: &[f64]) -> f64 {
        let q = quad_form(&self.q_inv, x);
        let joint = -(self.nu0 + self.d as f64) / 2.0 * (q / self.nu0).ln_1p();
        let marginals: f64 = x
            .iter()
            .map(|&v| (self.nu0 + 1.0) / 2.0 * (v * v / self.nu0).ln_1p())
            .sum();
        self.ln_const + joint + marginals
    }
}

/// Meta-stable copula density: the sub-Gaussian stable joint density over
/// the product of its standard stable marginals.
#[derive(Debug)]
pub struct MetaStableCopula<'g> {
    alpha0: f64,
    d: usize,
    subg: SubGaussianDensity,
    marginal_pdf: StablePdfTable,
    grid: &'g StableGrid,
}

impl<'g> MetaStableCopula<'g> {
    pub fn new(alpha0: f64, q: &DispersionMatrix, grid: &'g StableGrid) -> Result<Self> {
        if !(alpha0 > 1.0 && alpha0 < 2.0) {
            return Err(ModelError::InvalidParameter(format!(
                "copula index must lie strictly inside (1, 2), got {alpha0}"
            )));
        }
        if !grid.covers(alpha0) {
            return Err(ModelError::Dist(crate::dist::DistError::GridCoverage {
                alpha: alpha0,
                lo: grid.spec().alpha_lo,
                hi: grid.spec().alpha_hi,
            }));
        }
        // the driver with unit-diagonal Q has marginal scale 2^{-1/2};
        // doubling the dispersion standardizes the marginals to S(1, 0, 0)
        let two_q = DispersionMatrix::new(2.0 * q.matrix())?;
        Ok(Self {
            alpha0,
            d: q.dim(),
            subg: SubGaussianDensity::new(alpha0, &two_q)?,
            marginal_pdf: StablePdfTable::new(alpha0, 385)?,
            grid,
        })
    }

    pub fn ln_density(&self, u: &[f64]) -> Result<f64> {
        check_unit_cube(u, self.d)?;
        let mut x = vec![0.0; self.d];
        for (xi, &ui) in x.iter_mut().zip(u) {
            *xi = self.grid.quantile(self.alpha0, ui)?;
        }
        Ok(self.ln_density_from_quantiles(&x))
    }

    /// Density expressed in the already-transformed stable scores.
    pub fn ln_density_from_quantiles(&self, x: &[f64]) -> f64 {
        let joint = self.subg.g(self.subg.quad_form(x)).max(1e-320).ln();
        let marginals: f64 = x.iter().map(|&v| self.marginal_pdf.ln_pdf(v)).sum();
        joint - marginals
    }
}

/// One-shot t-copula density; build [`MetaTCopula`] for likelihood loops.
pub fn meta_t_copula_density(u: &[f64], nu0: f64, q: &DispersionMatrix) -> Result<f64> {
    Ok(MetaTCopula::new(nu0, q)?.ln_density(u)?.exp())
}

/// One-shot meta-stable copula density; build [`MetaStableCopula`] for
/// likelihood loops.
pub fn meta_stable_copula_density(
    u: &[f64],
    alpha0: f64,
    q: &DispersionMatrix,
    grid: &StableGrid,
) -> Result<f64> {
    Ok(MetaStableCopula::new(alpha0, q, grid)?.ln_density(u)?.exp())
}

/// One-shot Gaussian copula density (the degenerate endpoint of both meta
/// families).
pub fn gaussian_copula_density(u: &[f64], q: &DispersionMatrix) -> Result<f64> {
    Ok(GaussianCopula::new(q)?.ln_density(u)?.exp())
}
