//! Rolling-window backtest.
//!
//! For each date t past the warm-up window, the family is fitted on the
//! trailing `window` returns, the strategy is struck at the normalized spot
//! with the window's annualized volatilities, VaR is simulated, and the
//! next day's realized loss is scored against it. Violation counts,
//! proportions and Kupiec statistics come out per confidence level in the
//! layout of the published panels.
//!
//! The synthetic option book is re-struck at the money on every refit, so
//! the whole exercise is driven by the return series alone. Refit groups
//! are independent, which is what the parallel loop exploits; every group
//! draws from its own seed-derived substream, so reports do not depend on
//! the thread schedule.

use super::fit::{fit_model, ModelFamily};
use super::var::{kupiec_pof, simulate_losses, violation_series};
use super::{BacktestError, Result, Revaluation, VarConfig};
use crate::dist::{GridSpec, StableGrid};
use crate::portfolio::{LossFunction, StrategyTemplate, TRADING_DAY};
use crate::rng::RngState;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Violation scoring at one confidence level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BetaBacktest {
    pub beta: f64,
    pub violations: usize,
    /// violations / evaluated days
    pub proportion: f64,
    pub kupiec: f64,
    pub reliable: bool,
    pub var_series: Vec<f64>,
    pub violation_series: Vec<u8>,
}

/// Full rolling-backtest output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BacktestReport {
    pub family: String,
    pub revaluation: Revaluation,
    pub window: usize,
    pub paths: usize,
    pub seed: u64,
    /// Days actually scored (fit failures excluded).
    pub evaluated: usize,
    pub skipped: usize,
    pub realized_losses: Vec<f64>,
    pub per_beta: Vec<BetaBacktest>,
    pub warnings: Vec<String>,
}

impl BacktestReport {
    /// Aligned text table in the layout of the published panels:
    /// violations, percentage, likelihood ratio (asterisk = rejected).
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<28}{:>12}{:>14}{:>10}\n",
            "", "Violations", "Percentage", "LR"
        ));
        for b in &self.per_beta {
            let label = format!("{}_{:.0}%", self.family, b.beta * 100.0);
            let star = if b.reliable { "" } else { "*" };
            out.push_str(&format!(
                "{:<28}{:>12}{:>13.2}%{:>9.2}{}\n",
                label,
                b.violations,
                100.0 * b.proportion,
                b.kupiec,
                star
            ));
        }
        out
    }
}

struct GroupOutcome {
    first_date: usize,
    var_by_beta: Vec<f64>,
    realized: Vec<f64>,
    warnings: Vec<String>,
    failed: Option<String>,
}

/// Backtest `family` on a T x d matrix of log-returns.
pub fn rolling_backtest(
    returns: &DMatrix<f64>,
    template: &StrategyTemplate,
    family: ModelFamily,
    cfg: &VarConfig,
) -> Result<BacktestReport> {
    cfg.validate()?;
    let t_len = returns.nrows();
    let d = returns.ncols();
    if template.dim() > d {
        return Err(BacktestError::InvalidConfig(format!(
            "strategy references {} underlyings, series has {d}",
            template.dim()
        )));
    }
    if t_len < cfg.window + 1 {
        return Err(BacktestError::SeriesTooShort { needed: cfg.window + 1, got: t_len });
    }
    let grid = if family.requires_grid() {
        Some(StableGrid::build(&GridSpec::default())?)
    } else {
        None
    };
    let dates: Vec<usize> = (cfg.window..t_len).collect();
    let groups: Vec<&[usize]> = dates.chunks(cfg.refit_every).collect();
    let base_rng = RngState::with_stream(cfg.seed, 0x9a5c_17);

    let outcomes: Vec<GroupOutcome> = groups
        .par_iter()
        .enumerate()
        .map(|(g, group_dates)| {
            run_group(
                g,
                group_dates,
                returns,
                template,
                family,
                cfg,
                grid.as_ref(),
                &base_rng,
            )
        })
        .collect();

    let mut realized = Vec::new();
    let mut var_series: Vec<Vec<f64>> = vec![Vec::new(); cfg.betas.len()];
    let mut warnings = Vec::new();
    let mut skipped = 0usize;
    for o in outcomes {
        warnings.extend(o.warnings);
        if let Some(reason) = o.failed {
            skipped += o.realized.len();
            warnings.push(format!(
                "dates from index {} skipped: {reason}",
                o.first_date
            ));
            continue;
        }
        for (b, &v) in o.var_by_beta.iter().enumerate() {
            var_series[b].extend(std::iter::repeat_n(v, o.realized.len()));
        }
        realized.extend(o.realized);
    }
    let evaluated = realized.len();
    if evaluated == 0 {
        return Err(BacktestError::InvalidConfig(
            "every backtest date failed to fit".into(),
        ));
    }
    let mut per_beta = Vec::with_capacity(cfg.betas.len());
    for (b, &beta) in cfg.betas.iter().enumerate() {
        let xi = violation_series(&realized, &var_series[b])?;
        let violations = xi.iter().map(|&v| v as usize).sum::<usize>();
        let test = kupiec_pof(violations, evaluated, beta)?;
        per_beta.push(BetaBacktest {
            beta,
            violations,
            proportion: violations as f64 / evaluated as f64,
            kupiec: test.statistic,
            reliable: test.reliable,
            var_series: var_series[b].clone(),
            violation_series: xi,
        });
    }
    Ok(BacktestReport {
        family: family.name().to_string(),
        revaluation: cfg.revaluation,
        window: cfg.window,
        paths: cfg.paths,
        seed: cfg.seed,
        evaluated,
        skipped,
        realized_losses: realized,
        per_beta,
        warnings,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_group(
    group_idx: usize,
    group_dates: &[usize],
    returns: &DMatrix<f64>,
    template: &StrategyTemplate,
    family: ModelFamily,
    cfg: &VarConfig,
    grid: Option<&StableGrid>,
    base_rng: &RngState,
) -> GroupOutcome {
    let first = group_dates[0];
    let d = returns.ncols();
    let window = returns.rows(first - cfg.window, cfg.window).into_owned();
    // annualized volatility of the estimation window prices the book
    let vols: Vec<f64> = (0..d)
        .map(|j| {
            let col = window.column(j);
            let mean = col.sum() / cfg.window as f64;
            let var = col.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>()
                / cfg.window as f64;
            (var * 252.0).sqrt().max(1e-3)
        })
        .collect();
    let spots = vec![cfg.base_spot; d];
    let mut warnings = Vec::new();
    let fail = |reason: String, warnings: Vec<String>| GroupOutcome {
        first_date: first,
        var_by_beta: Vec::new(),
        realized: group_dates
            .iter()
            .map(|_| 0.0)
            .collect(),
        warnings,
        failed: Some(reason),
    };

    let portfolio = match template.instantiate(&spots, &vols, cfg.rate) {
        Ok(p) => p,
        Err(e) => return fail(format!("strategy instantiation failed: {e}"), warnings),
    };
    let (model, fit_warnings) = match fit_model(family, &window, grid) {
        Ok(r) => r,
        Err(e) => return fail(format!("fit failed: {e}"), warnings),
    };
    for w in fit_warnings {
        warnings.push(format!("group {group_idx}: {w}"));
    }
    let loss = match cfg.revaluation {
        Revaluation::Full => LossFunction::full(portfolio.clone()),
        Revaluation::Quadratic => match LossFunction::quadratic(&portfolio) {
            Ok(l) => l,
            Err(e) => return fail(format!("delta-gamma expansion failed: {e}"), warnings),
        },
    };
    let rng = base_rng.substream(group_idx as u64);
    let mut losses = match simulate_losses(&model, &loss, cfg, &rng, grid) {
        Ok(l) => l,
        Err(e) => return fail(format!("simulation failed: {e}"), warnings),
    };
    losses.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let m = losses.len();
    let var_by_beta: Vec<f64> = cfg
        .betas
        .iter()
        .map(|&b| losses[((b * m as f64).ceil() as usize).clamp(1, m) - 1])
        .collect();
    // realized next-day losses of the same book, full revaluation
    let mut realized = Vec::with_capacity(group_dates.len());
    for &t in group_dates {
        let x: Vec<f64> = (0..d).map(|j| returns[(t, j)]).collect();
        match portfolio.loss_full_revaluation(&x, TRADING_DAY) {
            Ok(l) => realized.push(l),
            Err(e) => return fail(format!("realized revaluation failed: {e}"), warnings),
        }
    }
    GroupOutcome { first_date: first, var_by_beta, realized, warnings, failed: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DispersionMatrix, GaussianModel};
    use crate::portfolio::StrategyPreset;

    fn synthetic_returns(t: usize, seed: u64) -> DMatrix<f64> {
        let q = DispersionMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[4e-4, 1.2e-4, 1.2e-4, 2.25e-4],
        ))
        .unwrap();
        let model = GaussianModel::new(q).unwrap();
        let mut rng = RngState::new(seed);
        model.sample(t, &mut rng)
    }

    #[test]
    fn deterministic_reports() {
        let returns = synthetic_returns(320, 9);
        let template = StrategyTemplate::preset(StrategyPreset::Nll, 2, 100.0);
        let cfg = VarConfig {
            paths: 2000,
            window: 250,
            refit_every: 10,
            seed: 31,
            ..VarConfig::default()
        };
        let a = rolling_backtest(&returns, &template, ModelFamily::Gaussian, &cfg).unwrap();
        let b = rolling_backtest(&returns, &template, ModelFamily::Gaussian, &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.evaluated, 70);
        assert_eq!(a.per_beta.len(), 2);
        // the report table has one line per level plus the header
        let table = a.text_table();
        assert_eq!(table.lines().count(), 3);
        assert!(table.contains("gaussian_95%"));
    }

    #[test]
    fn series_too_short_is_an_error() {
        let returns = synthetic_returns(100, 1);
        let template = StrategyTemplate::preset(StrategyPreset::Nll, 2, 100.0);
        let cfg = VarConfig { paths: 1000, window: 250, ..VarConfig::default() };
        assert!(matches!(
            rolling_backtest(&returns, &template, ModelFamily::Gaussian, &cfg),
            Err(BacktestError::SeriesTooShort { .. })
        ));
    }
}
