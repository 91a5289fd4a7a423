//! Simulated VaR, violation indicators and the Kupiec test.

use super::{BacktestError, Result, VarConfig};
use crate::dist::StableGrid;
use crate::models::RiskFactorModel;
use crate::portfolio::LossFunction;
use crate::rng::RngState;
use rayon::prelude::*;

/// 95% quantile of chi-square with one degree of freedom: the Kupiec
/// rejection threshold.
pub const KUPIEC_THRESHOLD: f64 = 3.841458820694124;

/// The ceil(beta * M)-th order statistic of the sample.
pub fn empirical_quantile(samples: &[f64], beta: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(BacktestError::EmptySample);
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(BacktestError::InvalidConfig(format!(
            "quantile level must lie in (0, 1), got {beta}"
        )));
    }
    let m = samples.len();
    let rank = ((beta * m as f64).ceil() as usize).clamp(1, m);
    let mut work = samples.to_vec();
    let (_, q, _) = work.select_nth_unstable_by(rank - 1, |a, b| {
        a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(*q)
}

/// Quantiles of an already sorted sample (ascending), one per level.
fn sorted_quantiles(sorted: &[f64], betas: &[f64]) -> Vec<f64> {
    let m = sorted.len();
    betas
        .iter()
        .map(|&b| sorted[((b * m as f64).ceil() as usize).clamp(1, m) - 1])
        .collect()
}

/// Monte Carlo loss sample of size `cfg.paths`, in chunk order so the
/// result is independent of the parallel schedule.
pub fn simulate_losses(
    model: &RiskFactorModel,
    loss: &LossFunction,
    cfg: &VarConfig,
    rng: &RngState,
    grid: Option<&StableGrid>,
) -> Result<Vec<f64>> {
    if model.dim() != loss.dim() {
        return Err(BacktestError::LengthMismatch(model.dim(), loss.dim()));
    }
    const CHUNK: usize = 4096;
    let chunks = cfg.paths.div_ceil(CHUNK);
    let parts: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut stream = rng.substream(c as u64);
            let size = CHUNK.min(cfg.paths - c * CHUNK);
            let mut out = Vec::with_capacity(size);
            let mut x = vec![0.0; model.dim()];
            for _ in 0..size {
                model.sample_row(&mut stream, grid, &mut x)?;
                out.push(loss.loss(&x)?);
            }
            Ok(out)
        })
        .collect();
    let mut losses = Vec::with_capacity(cfg.paths);
    for part in parts {
        losses.extend(part?);
    }
    Ok(losses)
}

/// VaR estimates (one per confidence level in `cfg.betas`) as empirical
/// quantiles of `cfg.paths` simulated losses.
pub fn simulate_var(
    model: &RiskFactorModel,
    loss: &LossFunction,
    cfg: &VarConfig,
    rng: &RngState,
    grid: Option<&StableGrid>,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let mut losses = simulate_losses(model, loss, cfg, rng, grid)?;
    losses.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sorted_quantiles(&losses, &cfg.betas))
}

/// Violation indicators: 1 when the realized loss strictly exceeds the
/// prior-day VaR (ties are not violations).
pub fn violation_series(realized: &[f64], var: &[f64]) -> Result<Vec<u8>> {
    if realized.len() != var.len() {
        return Err(BacktestError::LengthMismatch(realized.len(), var.len()));
    }
    Ok(realized
        .iter()
        .zip(var)
        .map(|(&l, &v)| u8::from(l > v))
        .collect())
}

/// Kupiec proportion-of-failures test.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KupiecTest {
    pub statistic: f64,
    /// statistic < chi-square(1) 95% quantile
    pub reliable: bool,
}

/// Likelihood ratio of observing `x` violations in `n` days at nominal
/// level `beta`, with the 0 log 0 = 0 convention at the boundary counts.
pub fn kupiec_pof(x: usize, n: usize, beta: f64) -> Result<KupiecTest> {
    if n == 0 || x > n {
        return Err(BacktestError::InvalidCounts(format!("x = {x}, n = {n}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(BacktestError::InvalidConfig(format!(
            "confidence level must lie in (0, 1), got {beta}"
        )));
    }
    let (xf, nf) = (x as f64, n as f64);
    let p_hat = xf / nf;
    let xlogy = |a: f64, y: f64| if a == 0.0 { 0.0 } else { a * y.ln() };
    let ln_null = xlogy(xf, 1.0 - beta) + xlogy(nf - xf, beta);
    let ln_alt = xlogy(xf, p_hat) + xlogy(nf - xf, 1.0 - p_hat);
    let statistic = (-2.0 * (ln_null - ln_alt)).max(0.0);
    Ok(KupiecTest { statistic, reliable: statistic < KUPIEC_THRESHOLD })
}
