//! Method-of-moments dispersion estimation for the t-like family.
//!
//! Cross moments factor over the independent chi-square divisors:
//! E X_h X_k = Q_hk sqrt(nu_h nu_k) E V_h^{-1/2} E V_k^{-1/2} with
//! E V^{-1/2} = G((nu-1)/2) / (sqrt(2) G(nu/2)), so each product moment is
//! rescaled by
//!
//! ```text
//! C_nu = sqrt(2/nu) * G(nu/2) / G((nu-1)/2) = 1 / (sqrt(nu) E V^{-1/2})
//! ```
//!
//! and the diagonal uses E X_k^2 = Q_kk nu_k / (nu_k - 2).

use super::{EstimationError, FitReport, Result};
use crate::models::DispersionMatrix;
use nalgebra::DMatrix;
use statrs::function::gamma::gamma;

/// The moment-matching constant C_nu (requires nu > 1; the estimator
/// itself additionally needs nu > 2 for finite second moments).
pub fn t_moment_constant(nu: f64) -> Result<f64> {
    if !(nu > 1.0) || !nu.is_finite() {
        return Err(EstimationError::InvalidParameter(format!(
            "moment constant needs dof > 1, got {nu}"
        )));
    }
    Ok((2.0 / nu).sqrt() * gamma(nu / 2.0) / gamma((nu - 1.0) / 2.0))
}

/// E V^{-p/2} for V chi-square with nu dof: G(nu/2 - p/2) / (2^{p/2} G(nu/2)).
/// The fractional-moment route that relaxes the nu > 2 requirement.
pub fn inverse_chi_fractional_moment(nu: f64, p: f64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(EstimationError::InvalidParameter(format!(
            "dof must be positive, got {nu}"
        )));
    }
    if !(p >= 0.0 && p < nu) {
        return Err(EstimationError::InvalidParameter(format!(
            "fractional order must lie in [0, nu) = [0, {nu}), got {p}"
        )));
    }
    Ok(gamma((nu - p) / 2.0) / (2.0f64.powf(p / 2.0) * gamma(nu / 2.0)))
}

/// Dispersion estimator of the t-like family by the method of moments.
/// Degrees of freedom are taken as given (known or separately estimated);
/// the result is PSD-repaired with the moment diagonal restored.
pub fn estimate_dispersion_t_like(
    samples: &DMatrix<f64>,
    nus: &[f64],
) -> Result<(DispersionMatrix, FitReport)> {
    let (n, d) = (samples.nrows(), samples.ncols());
    if nus.len() != d {
        return Err(EstimationError::LengthMismatch(nus.len(), d));
    }
    if n < 30 {
        return Err(EstimationError::TooFewObservations { needed: 30, got: n });
    }
    for &nu in nus {
        if !(nu > 2.0) {
            return Err(EstimationError::DofTooSmall(nu));
        }
    }
    let consts: Vec<f64> = nus
        .iter()
        .map(|&nu| t_moment_constant(nu))
        .collect::<Result<Vec<_>>>()?;
    let nf = n as f64;
    let mut raw = DMatrix::zeros(d, d);
    for h in 0..d {
        let xh = samples.column(h);
        raw[(h, h)] = (nus[h] - 2.0) / nus[h] * xh.iter().map(|v| v * v).sum::<f64>() / nf;
        for k in (h + 1)..d {
            let xk = samples.column(k);
            let cross: f64 = xh.iter().zip(xk.iter()).map(|(a, b)| a * b).sum::<f64>() / nf;
            let q = consts[h] * consts[k] * cross;
            raw[(h, k)] = q;
            raw[(k, h)] = q;
        }
    }
    // repair on the correlation scale, then put the moment diagonal back
    let scales: Vec<f64> = (0..d).map(|k| raw[(k, k)].max(1e-12).sqrt()).collect();
    let mut corr = raw.clone();
    for h in 0..d {
        for k in 0..d {
            corr[(h, k)] /= scales[h] * scales[k];
        }
    }
    let (repaired, magnitude) = DispersionMatrix::repair(&corr, true)?;
    let mut q = repaired.matrix().clone();
    for h in 0..d {
        for k in 0..d {
            q[(h, k)] *= scales[h] * scales[k];
        }
    }
    let mut report = FitReport::converged();
    report.psd_repair = Some(magnitude);
    if magnitude > 0.05 {
        report.warn(format!("PSD repair moved the moment matrix by {magnitude:.3}"));
    }
    Ok((DispersionMatrix::new(q)?, report))
}

/// Asymptotic variance of the pairwise estimator
/// q_hat = C_{nu1} C_{nu2} mean(X_1 X_2) at unit-diagonal dispersion:
///
/// ```text
/// v(q) = [nu1 C1^2/(nu1-2)] [nu2 C2^2/(nu2-2)] (2 q^2 + 1) - q^2
/// ```
///
/// using E G_1^2 G_2^2 = 2 q^2 + 1 for the correlated Gaussian pair.
pub fn t_like_asymptotic_variance(q: f64, nu1: f64, nu2: f64) -> Result<f64> {
    if !(q > -1.0 && q < 1.0) {
        return Err(EstimationError::InvalidParameter(format!(
            "correlation must lie inside (-1, 1), got {q}"
        )));
    }
    if !(nu1 > 2.0) {
        return Err(EstimationError::DofTooSmall(nu1));
    }
    if !(nu2 > 2.0) {
        return Err(EstimationError::DofTooSmall(nu2));
    }
    let c1 = t_moment_constant(nu1)?;
    let c2 = t_moment_constant(nu2)?;
    let a1 = nu1 * c1 * c1 / (nu1 - 2.0);
    let a2 = nu2 * c2 * c2 / (nu2 - 2.0);
    Ok(a1 * a2 * (2.0 * q * q + 1.0) - q * q)
}
