//! Implementations of the six subcommands.

use crate::config::RunConfig;
use crate::data::{load_prices_csv, PriceTable};
use crate::error::{CliError, Result};
use crate::output::write_atomic;
use heavytail::backtest::{fit_model, rolling_backtest, simulate_var, ModelFamily};
use heavytail::dist::{GridSpec, StableGrid};
use heavytail::estimation::{descriptive_stats, signed_moment};
use heavytail::models::RiskFactorModel;
use heavytail::portfolio::{LossFunction, StrategyPreset, StrategyTemplate};
use heavytail::pricing::{self, MarketState, OptionKind, OptionSpec};
use heavytail::RngState;
use nalgebra::DMatrix;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Resolve `--portfolio`: a named preset or `file:PATH` with a strategy
/// template document.
fn resolve_template(spec: &str, d: usize, stock_value: f64) -> Result<StrategyTemplate> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {path}: {e}")))?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("bad strategy file {path}: {e}")));
    }
    let preset: StrategyPreset = spec.parse().map_err(CliError::input)?;
    Ok(StrategyTemplate::preset(preset, d, stock_value))
}

fn load_returns(data: &Path) -> Result<(PriceTable, DMatrix<f64>)> {
    let table = load_prices_csv(data)?;
    let returns = table.log_returns()?;
    Ok((table, returns))
}

/// Trailing `window` rows (or everything when the series is shorter than
/// the requested window is an error; `None` means use all rows).
fn trailing_window(returns: &DMatrix<f64>, window: Option<usize>) -> Result<DMatrix<f64>> {
    match window {
        None => Ok(returns.clone()),
        Some(w) => {
            if returns.nrows() < w {
                return Err(CliError::input(format!(
                    "need {w} return rows for the requested window, have {}",
                    returns.nrows()
                )));
            }
            Ok(returns.rows(returns.nrows() - w, w).into_owned())
        }
    }
}

fn annualized_vols(window: &DMatrix<f64>) -> Vec<f64> {
    let n = window.nrows() as f64;
    (0..window.ncols())
        .map(|j| {
            let col = window.column(j);
            let mean = col.sum() / n;
            let var = col.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n;
            (var * 252.0).sqrt().max(1e-3)
        })
        .collect()
}

fn build_grid_if_needed(family: ModelFamily) -> Result<Option<StableGrid>> {
    if family.requires_grid() {
        Ok(Some(StableGrid::build(&GridSpec::default()).map_err(CliError::numeric)?))
    } else {
        Ok(None)
    }
}

// ---------------------------------------------------------------------------

pub fn cmd_fit(data: &Path, cfg: &RunConfig, window: Option<usize>, out: &Path) -> Result<()> {
    let (_, returns) = load_returns(data)?;
    let fit_window = trailing_window(&returns, window)?;
    let grid = build_grid_if_needed(cfg.model)?;
    let (model, warnings) =
        fit_model(cfg.model, &fit_window, grid.as_ref()).map_err(CliError::numeric)?;
    for w in &warnings {
        eprintln!("note: {w}");
    }
    let json = serde_json::to_string_pretty(&model)
        .map_err(|e| CliError::numeric(format!("cannot serialize model: {e}")))?;
    write_atomic(out, json.as_bytes())?;
    println!("fitted {} model on {} observations -> {}", cfg.model, fit_window.nrows(), out.display());
    Ok(())
}

#[derive(Serialize)]
struct VarOutput<'a> {
    family: &'a str,
    betas: &'a [f64],
    var: Vec<f64>,
    paths: usize,
    seed: u64,
}

pub fn cmd_var(
    data: &Path,
    cfg: &RunConfig,
    model_file: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<()> {
    let (_, returns) = load_returns(data)?;
    let fit_window = trailing_window(&returns, Some(cfg.window.min(returns.nrows())))?;
    let model: RiskFactorModel = match model_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("bad model file {}: {e}", path.display())))?
        }
        None => {
            let grid = build_grid_if_needed(cfg.model)?;
            fit_model(cfg.model, &fit_window, grid.as_ref())
                .map_err(CliError::numeric)?
                .0
        }
    };
    if model.dim() != returns.ncols() {
        return Err(CliError::input(format!(
            "model has {} risk factors, data has {}",
            model.dim(),
            returns.ncols()
        )));
    }
    let template = resolve_template(&cfg.portfolio, returns.ncols(), cfg.stock_value)?;
    let vols = annualized_vols(&fit_window);
    let spots = vec![cfg.base_spot; returns.ncols()];
    let portfolio = template
        .instantiate(&spots, &vols, cfg.rate)
        .map_err(CliError::input)?;
    let loss = match cfg.revaluation {
        heavytail::backtest::Revaluation::Full => LossFunction::full(portfolio),
        heavytail::backtest::Revaluation::Quadratic => {
            LossFunction::quadratic(&portfolio).map_err(CliError::numeric)?
        }
    };
    let grid = if model.requires_grid() {
        Some(StableGrid::build(&GridSpec::default()).map_err(CliError::numeric)?)
    } else {
        None
    };
    let var = simulate_var(
        &model,
        &loss,
        &cfg.to_var_config(),
        &RngState::new(cfg.seed),
        grid.as_ref(),
    )
    .map_err(CliError::numeric)?;
    for (beta, v) in cfg.betas.iter().zip(&var) {
        println!("VaR[{beta}] = {v:.6}");
    }
    if let Some(path) = out {
        let doc = VarOutput {
            family: model.family_name(),
            betas: &cfg.betas,
            var,
            paths: cfg.paths,
            seed: cfg.seed,
        };
        write_atomic(path, serde_json::to_string_pretty(&doc).unwrap().as_bytes())?;
    }
    Ok(())
}

pub fn cmd_backtest(data: &Path, cfg: &RunConfig, out: Option<&PathBuf>) -> Result<()> {
    let (_, returns) = load_returns(data)?;
    let template = resolve_template(&cfg.portfolio, returns.ncols(), cfg.stock_value)?;
    let report = rolling_backtest(&returns, &template, cfg.model, &cfg.to_var_config())
        .map_err(CliError::numeric)?;
    print!("{}", report.text_table());
    if report.skipped > 0 {
        eprintln!("note: {} dates skipped after fit failures", report.skipped);
    }
    if let Some(path) = out {
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::numeric(format!("cannot serialize report: {e}")))?;
        write_atomic(path, json.as_bytes())?;
    }
    Ok(())
}

fn parse_kind(raw: &str) -> Result<OptionKind> {
    serde_json::from_value(serde_json::Value::String(raw.to_string()))
        .map_err(|_| CliError::input(format!("unknown option kind {raw:?}")))
}

#[derive(serde::Deserialize)]
struct PriceRequest {
    spec: OptionSpec,
    market: MarketState,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_price(
    json: Option<&PathBuf>,
    kind: Option<&String>,
    strike: Option<f64>,
    barrier: Option<f64>,
    cash: Option<f64>,
    expiry: Option<f64>,
    spot: Option<f64>,
    vol: Option<f64>,
    rate: f64,
    out: Option<&PathBuf>,
) -> Result<()> {
    let (spec, market) = match json {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
            let req: PriceRequest = serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("bad price request: {e}")))?;
            (req.spec, req.market)
        }
        None => {
            let kind = parse_kind(
                kind.ok_or_else(|| CliError::input("--kind is required without --json"))?,
            )?;
            let spec = OptionSpec {
                kind,
                strike: strike
                    .ok_or_else(|| CliError::input("--strike is required without --json"))?,
                barrier,
                expiry: expiry
                    .ok_or_else(|| CliError::input("--expiry is required without --json"))?,
                cash,
            };
            let market = MarketState {
                spot: spot.ok_or_else(|| CliError::input("--spot is required without --json"))?,
                rate,
                vol: vol.ok_or_else(|| CliError::input("--vol is required without --json"))?,
            };
            (spec, market)
        }
    };
    spec.validate().map_err(CliError::input)?;
    market.validate().map_err(CliError::input)?;
    let quote = pricing::price(&spec, &market).map_err(CliError::numeric)?;
    let json_out = serde_json::to_string_pretty(&quote).unwrap();
    println!("{json_out}");
    if let Some(path) = out {
        write_atomic(path, json_out.as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TickerStats<'a> {
    ticker: &'a str,
    kurtosis: f64,
    jarque_bera: f64,
    p_value: f64,
}

pub fn cmd_stats(data: &Path, out: Option<&PathBuf>) -> Result<()> {
    let (table, returns) = load_returns(data)?;
    let mut rows = Vec::new();
    println!("{:<16}{:>12}{:>14}{:>12}", "Ticker", "Kurtosis", "JB", "p-value");
    for (j, ticker) in table.tickers.iter().enumerate() {
        let col: Vec<f64> = returns.column(j).iter().cloned().collect();
        let s = descriptive_stats(&col).map_err(CliError::numeric)?;
        println!(
            "{:<16}{:>12.3}{:>14.1}{:>12.4}",
            ticker, s.kurtosis, s.jarque_bera, s.p_value
        );
        rows.push(TickerStats {
            ticker,
            kurtosis: s.kurtosis,
            jarque_bera: s.jarque_bera,
            p_value: s.p_value,
        });
    }
    if let Some(path) = out {
        write_atomic(path, serde_json::to_string_pretty(&rows).unwrap().as_bytes())?;
    }
    Ok(())
}

/// Tabulate the signed-moment curve q -> f_p(q) on [0, 0.99].
pub fn cmd_plot_fp(p: f64, out: &Path) -> Result<()> {
    let mut csv = String::from("q,f_p\n");
    for i in 0..=99 {
        let q = i as f64 / 100.0;
        let f = signed_moment(q, p).map_err(CliError::input)?;
        csv.push_str(&format!("{q:.2},{f:.10}\n"));
    }
    write_atomic(out, csv.as_bytes())?;
    println!("wrote {} rows -> {}", 100, out.display());
    Ok(())
}
