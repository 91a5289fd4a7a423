//! Marginal maximum likelihood for symmetric stable and Student-t margins.
//!
//! Both fits run a derivative-free simplex over transformed parameters
//! (bounds mapped to the real line), restarted from quantile- or
//! kurtosis-based initial guesses. Non-convergence is reported, not
//! raised: the last iterate is still returned with the flag cleared.

use super::{EstimationError, FitReport, Result};
use crate::dist::{stable_quantile, StablePdfTable};
use crate::numeric::nelder_mead;
use statrs::distribution::{Continuous, StudentsT};

/// Fitted symmetric stable margin: S_alpha(sigma, 0, 0).
#[derive(Debug, Clone, Copy)]
pub struct StableMarginalFit {
    pub alpha: f64,
    pub sigma: f64,
}

/// Fitted t margin: delta * t(nu). `degenerate` marks fits driven into the
/// Gaussian-like cap nu = 500.
#[derive(Debug, Clone, Copy)]
pub struct TMarginalFit {
    pub nu: f64,
    pub delta: f64,
    pub degenerate: bool,
}

const ALPHA_LO: f64 = 1.05;
const ALPHA_HI: f64 = 2.0;
const NU_LO: f64 = 0.5;
const NU_CAP: f64 = 500.0;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn logit(u: f64) -> f64 {
    (u / (1.0 - u)).ln()
}

fn quantiles(sorted: &[f64], u: f64) -> f64 {
    let n = sorted.len();
    let pos = (u * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
    let i = pos.floor() as usize;
    let t = pos - i as f64;
    if i + 1 < n {
        sorted[i] * (1.0 - t) + sorted[i + 1] * t
    } else {
        sorted[i]
    }
}

/// Maximum likelihood over alpha in (1.05, 2], sigma > 0 for a symmetric
/// stable margin.
pub fn fit_marginal_stable(series: &[f64]) -> Result<(StableMarginalFit, FitReport)> {
    let n = series.len();
    if n < 100 {
        return Err(EstimationError::TooFewObservations { needed: 100, got: n });
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let iqr = quantiles(&sorted, 0.75) - quantiles(&sorted, 0.25);
    if !(iqr > 0.0) {
        return Err(EstimationError::DegenerateSeries);
    }
    // quantile-ratio initializer: the 0.95/0.75 spread widens as the index
    // falls, so match it over a coarse alpha sweep
    let spread = (quantiles(&sorted, 0.95) - quantiles(&sorted, 0.05)) / iqr;
    let mut alpha0 = 1.9;
    let mut best_gap = f64::INFINITY;
    for i in 0..=12 {
        let a = 1.1 + 0.85 * i as f64 / 12.0;
        let ratio = stable_quantile(0.95, a)? / stable_quantile(0.75, a)?;
        let gap = (ratio - spread).abs();
        if gap < best_gap {
            best_gap = gap;
            alpha0 = a;
        }
    }
    let sigma0 = iqr / (2.0 * stable_quantile(0.75, alpha0)?);

    let neg_ll = |params: &[f64]| -> f64 {
        let alpha = ALPHA_LO + (ALPHA_HI - ALPHA_LO) * logistic(params[0]);
        let sigma = params[1].exp();
        let table = match StablePdfTable::new(alpha, 257) {
            Ok(t) => t,
            Err(_) => return f64::MAX / 4.0,
        };
        let mut ll = -(sigma.ln()) * n as f64;
        for &x in series {
            ll += table.ln_pdf(x / sigma);
        }
        -ll
    };

    let starts = [
        (alpha0, sigma0),
        ((alpha0 + 0.25).min(1.95), sigma0),
        ((alpha0 - 0.3).max(1.15), 1.3 * sigma0),
    ];
    let mut best: Option<crate::numeric::SimplexResult> = None;
    let mut iterations = 0;
    for (a, s) in starts {
        let x0 = [
            logit(((a - ALPHA_LO) / (ALPHA_HI - ALPHA_LO)).clamp(0.02, 0.98)),
            s.ln(),
        ];
        let r = nelder_mead(neg_ll, &x0, 0.35, 1e-9, 250);
        iterations += r.iterations;
        if best.as_ref().is_none_or(|b| r.fx < b.fx) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    let fit = StableMarginalFit {
        alpha: ALPHA_LO + (ALPHA_HI - ALPHA_LO) * logistic(best.x[0]),
        sigma: best.x[1].exp(),
    };
    let report = FitReport {
        converged: best.converged,
        iterations,
        log_likelihood: Some(-best.fx),
        psd_repair: None,
        warnings: if best.converged {
            vec![]
        } else {
            vec!["simplex search did not converge; returning the best iterate".into()]
        },
    };
    Ok((fit, report))
}

/// Maximum likelihood over nu in (0.5, 500], delta > 0 for a scaled t
/// margin. Fits at the dof cap are flagged as degenerate (Gaussian-like).
pub fn fit_marginal_t(series: &[f64]) -> Result<(TMarginalFit, FitReport)> {
    let n = series.len();
    if n < 100 {
        return Err(EstimationError::TooFewObservations { needed: 100, got: n });
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let var = series.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / nf;
    if !(var > 0.0) {
        return Err(EstimationError::DegenerateSeries);
    }
    let m4 = series.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / nf;
    let kurt = m4 / (var * var);
    // kurtosis matching: K = 3 + 6/(nu - 4)
    let nu0 = if kurt > 3.2 { (4.0 + 6.0 / (kurt - 3.0)).clamp(2.2, 60.0) } else { 60.0 };
    let delta0 = (var * (nu0 - 2.0).max(0.5) / nu0).sqrt();

    let ln_span = (NU_CAP / NU_LO).ln();
    let neg_ll = |params: &[f64]| -> f64 {
        let nu = NU_LO * (ln_span * logistic(params[0])).exp();
        let delta = params[1].exp();
        let dist = match StudentsT::new(0.0, 1.0, nu) {
            Ok(d) => d,
            Err(_) => return f64::MAX / 4.0,
        };
        let mut ll = -(delta.ln()) * nf;
        for &x in series {
            ll += dist.ln_pdf(x / delta);
        }
        -ll
    };

    let starts = [(nu0, delta0), (nu0 * 2.5, delta0), ((nu0 * 0.5).max(1.0), delta0 * 1.2)];
    let mut best: Option<crate::numeric::SimplexResult> = None;
    let mut iterations = 0;
    for (nu, delta) in starts {
        let x0 = [logit(((nu / NU_LO).ln() / ln_span).clamp(0.02, 0.98)), delta.ln()];
        let r = nelder_mead(neg_ll, &x0, 0.4, 1e-9, 250);
        iterations += r.iterations;
        if best.as_ref().is_none_or(|b| r.fx < b.fx) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    let nu = NU_LO * (ln_span * logistic(best.x[0])).exp();
    let delta = best.x[1].exp();
    // the likelihood flattens above nu ~ 100; the fit is Gaussian-like
    // whenever the dof cap explains the data essentially as well as the
    // interior optimum
    let ll_at_cap = -neg_ll(&[logit(1.0 - 1e-6), delta.ln()]);
    let degenerate = nu >= 450.0 || (-best.fx - ll_at_cap) <= 0.5;
    let fit = TMarginalFit { nu, delta, degenerate };
    let mut report = FitReport {
        converged: best.converged,
        iterations,
        log_likelihood: Some(-best.fx),
        psd_repair: None,
        warnings: vec![],
    };
    if fit.degenerate {
        report.warn("dof at the Gaussian-like cap; margin is indistinguishable from normal");
    }
    if !best.converged {
        report.warn("simplex search did not converge; returning the best iterate");
    }
    Ok((fit, report))
}
