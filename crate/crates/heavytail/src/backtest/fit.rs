//! Per-family model fitting on a return window.
//!
//! Marginals first, then dependence, then (for the meta families) the
//! copula parameter. The degenerate meta variants pin the copula parameter
//! at the Gaussian endpoint instead of estimating it.

use super::{BacktestError, Result};
use crate::dist::StableGrid;
use crate::estimation::{
    estimate_dispersion_meta, estimate_dispersion_stable_like, estimate_dispersion_t_like,
    fit_marginal_stable, fit_marginal_t, fit_meta_stable_index, fit_meta_t_dof,
    CopulaDofEstimate, FracMomentConfig,
};
use crate::models::{
    CopulaDof, DispersionMatrix, GaussianModel, MetaStableModel, MetaTModel, RiskFactorModel,
    StableLikeModel, TLikeModel,
};
use nalgebra::DMatrix;

/// The model families the backtester can fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelFamily {
    Gaussian,
    StableLike,
    TLike,
    MetaStable,
    MetaT,
    MetaStableDegenerate,
    MetaTDegenerate,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 7] = [
        ModelFamily::Gaussian,
        ModelFamily::StableLike,
        ModelFamily::TLike,
        ModelFamily::MetaStable,
        ModelFamily::MetaT,
        ModelFamily::MetaStableDegenerate,
        ModelFamily::MetaTDegenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Gaussian => "gaussian",
            ModelFamily::StableLike => "stable-like",
            ModelFamily::TLike => "t-like",
            ModelFamily::MetaStable => "meta-stable",
            ModelFamily::MetaT => "meta-t",
            ModelFamily::MetaStableDegenerate => "meta-stable-degenerate",
            ModelFamily::MetaTDegenerate => "meta-t-degenerate",
        }
    }

    pub fn requires_grid(self) -> bool {
        matches!(
            self,
            ModelFamily::MetaStable | ModelFamily::MetaStableDegenerate
        )
    }
}

impl std::str::FromStr for ModelFamily {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ModelFamily::ALL
            .iter()
            .find(|f| f.name() == s)
            .copied()
            .ok_or_else(|| format!("unknown model family {s:?}"))
    }
}

impl std::fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Sample covariance (maximum-likelihood normalization).
fn sample_covariance(window: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, d) = (window.nrows(), window.ncols());
    let nf = n as f64;
    let means: Vec<f64> = (0..d).map(|j| window.column(j).sum() / nf).collect();
    let mut cov = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let mut s = 0.0;
            for t in 0..n {
                s += (window[(t, i)] - means[i]) * (window[(t, j)] - means[j]);
            }
            let v = s / nf;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    cov
}

/// Fit `family` on a window of returns (rows are days). Returns the model
/// plus any fitting warnings worth surfacing in a report.
pub fn fit_model(
    family: ModelFamily,
    window: &DMatrix<f64>,
    grid: Option<&StableGrid>,
) -> Result<(RiskFactorModel, Vec<String>)> {
    let d = window.ncols();
    if d == 0 || window.nrows() < 50 {
        return Err(BacktestError::SeriesTooShort { needed: 50, got: window.nrows() });
    }
    let mut warnings = Vec::new();
    let cols: Vec<Vec<f64>> = (0..d)
        .map(|j| window.column(j).iter().cloned().collect())
        .collect();

    let model = match family {
        ModelFamily::Gaussian => {
            let (q, pert) = DispersionMatrix::repair(&sample_covariance(window), false)?;
            if pert > 1e-8 {
                warnings.push(format!("covariance repaired by {pert:.2e}"));
            }
            RiskFactorModel::Gaussian(GaussianModel::new(q)?)
        }
        ModelFamily::StableLike => {
            let mut alphas = Vec::with_capacity(d);
            let mut sigmas = Vec::with_capacity(d);
            for (k, col) in cols.iter().enumerate() {
                let (fit, report) = fit_marginal_stable(col)?;
                if !report.converged {
                    warnings.push(format!("marginal {k}: stable fit did not converge"));
                }
                // the mixture needs indices strictly inside (1, 2)
                alphas.push(fit.alpha.min(1.999));
                sigmas.push(fit.sigma);
            }
            // consistency of the moment inversion only needs p < min(alpha)/2
            let p = 0.5f64.min(alphas.iter().cloned().fold(2.0, f64::min) / 2.0 - 0.01);
            let cfg = FracMomentConfig { p, ..FracMomentConfig::default() };
            let (q, report) = estimate_dispersion_stable_like(window, &alphas, &sigmas, &cfg)?;
            warnings.extend(report.warnings);
            RiskFactorModel::StableLike(StableLikeModel::new(alphas, sigmas, q)?)
        }
        ModelFamily::TLike => {
            let mut nus = Vec::with_capacity(d);
            for (k, col) in cols.iter().enumerate() {
                let (fit, report) = fit_marginal_t(col)?;
                if !report.converged {
                    warnings.push(format!("marginal {k}: t fit did not converge"));
                }
                // finite variance drives the moment estimator
                if fit.nu <= 2.1 {
                    warnings.push(format!(
                        "marginal {k}: dof {:.2} at the finite-variance floor",
                        fit.nu
                    ));
                }
                nus.push(fit.nu.max(2.1));
            }
            let (q, report) = estimate_dispersion_t_like(window, &nus)?;
            warnings.extend(report.warnings);
            RiskFactorModel::TLike(TLikeModel::new(nus, q)?)
        }
        ModelFamily::MetaStable | ModelFamily::MetaStableDegenerate => {
            let grid = grid.ok_or(crate::models::ModelError::GridRequired)
                .map_err(BacktestError::from)?;
            let mut alphas = Vec::with_capacity(d);
            let mut sigmas = Vec::with_capacity(d);
            for (k, col) in cols.iter().enumerate() {
                let (fit, report) = fit_marginal_stable(col)?;
                if !report.converged {
                    warnings.push(format!("marginal {k}: stable fit did not converge"));
                }
                alphas.push(fit.alpha);
                sigmas.push(fit.sigma);
            }
            let (q, report) = estimate_dispersion_meta(window)?;
            warnings.extend(report.warnings);
            let alpha0 = if family == ModelFamily::MetaStableDegenerate {
                2.0
            } else {
                let u = pseudo_uniform_stable(window, &alphas, &sigmas, grid)?;
                match fit_meta_stable_index(&u, &q, grid)? {
                    (CopulaDofEstimate::Interior(a), _) => a,
                    (CopulaDofEstimate::DegenerateGaussian, _) => {
                        warnings.push("copula index at the Gaussian endpoint".into());
                        2.0
                    }
                }
            };
            RiskFactorModel::MetaStable(MetaStableModel::new(alpha0, alphas, sigmas, q)?)
        }
        ModelFamily::MetaT | ModelFamily::MetaTDegenerate => {
            let mut nus = Vec::with_capacity(d);
            let mut deltas = Vec::with_capacity(d);
            for (k, col) in cols.iter().enumerate() {
                let (fit, report) = fit_marginal_t(col)?;
                if !report.converged {
                    warnings.push(format!("marginal {k}: t fit did not converge"));
                }
                nus.push(fit.nu);
                deltas.push(fit.delta);
            }
            let (q, report) = estimate_dispersion_meta(window)?;
            warnings.extend(report.warnings);
            let nu0 = if family == ModelFamily::MetaTDegenerate {
                CopulaDof::Gaussian
            } else {
                let u = pseudo_uniform_t(window, &nus, &deltas)?;
                match fit_meta_t_dof(&u, &q)? {
                    (CopulaDofEstimate::Interior(v), _) => CopulaDof::Finite(v.max(2.05)),
                    (CopulaDofEstimate::DegenerateGaussian, _) => {
                        warnings.push("copula dof at the Gaussian endpoint".into());
                        CopulaDof::Gaussian
                    }
                }
            };
            RiskFactorModel::MetaT(MetaTModel::new(nu0, nus, deltas, q)?)
        }
    };
    Ok((model, warnings))
}

/// Push observations through fitted stable marginals to the unit cube.
fn pseudo_uniform_stable(
    window: &DMatrix<f64>,
    alphas: &[f64],
    sigmas: &[f64],
    grid: &StableGrid,
) -> Result<DMatrix<f64>> {
    let (n, d) = (window.nrows(), window.ncols());
    let mut u = DMatrix::zeros(n, d);
    for j in 0..d {
        for i in 0..n {
            let z = window[(i, j)] / sigmas[j];
            let v = if alphas[j] >= 2.0 {
                crate::dist::normal_cdf(z / std::f64::consts::SQRT_2)
            } else {
                grid.cdf(alphas[j], z)?
            };
            u[(i, j)] = v.clamp(1e-12, 1.0 - 1e-12);
        }
    }
    Ok(u)
}

/// Push observations through fitted t marginals to the unit cube.
fn pseudo_uniform_t(window: &DMatrix<f64>, nus: &[f64], deltas: &[f64]) -> Result<DMatrix<f64>> {
    let (n, d) = (window.nrows(), window.ncols());
    let mut u = DMatrix::zeros(n, d);
    for j in 0..d {
        let t = crate::dist::StudentMarginal::new(nus[j]).map_err(BacktestError::from)?;
        for i in 0..n {
            u[(i, j)] = t.cdf(window[(i, j)] / deltas[j]).clamp(1e-12, 1.0 - 1e-12);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngState;

    #[test]
    fn family_names_roundtrip() {
        for f in ModelFamily::ALL {
            let parsed: ModelFamily = f.name().parse().unwrap();
            assert_eq!(parsed, f);
        }
        assert!("nope".parse::<ModelFamily>().is_err());
    }

    #[test]
    fn gaussian_fit_recovers_covariance() {
        let q = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        let model = GaussianModel::new(DispersionMatrix::new(q.clone()).unwrap()).unwrap();
        let mut rng = RngState::new(12);
        let sample = model.sample(20_000, &mut rng);
        let (fit, warnings) = fit_model(ModelFamily::Gaussian, &sample, None).unwrap();
        assert!(warnings.is_empty());
        let RiskFactorModel::Gaussian(g) = fit else { panic!("family") };
        let diff = (g.dispersion().matrix() - &q)
            .iter()
            .fold(0.0f64, |a, &b| a.max(b.abs()));
        assert!(diff < 0.05, "max diff {diff}");
    }

    #[test]
    fn degenerate_meta_t_pins_the_gaussian_copula() {
        let mut rng = RngState::new(3);
        let sample = DMatrix::from_fn(300, 2, |_, _| rng.standard_normal());
        let (fit, _) = fit_model(ModelFamily::MetaTDegenerate, &sample, None).unwrap();
        let RiskFactorModel::MetaT(m) = fit else { panic!("family") };
        assert!(m.is_degenerate());
    }
}
