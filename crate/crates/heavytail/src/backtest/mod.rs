//! Monte Carlo Value-at-Risk and rolling-window backtesting.
//!
//! VaR at level beta is the empirical beta-quantile of simulated portfolio
//! losses. The backtester walks a rolling window over a return series,
//! refits the chosen model family, simulates the one-day loss distribution,
//! and scores the out-of-sample violations with the Kupiec
//! proportion-of-failures likelihood ratio.

mod fit;
mod rolling;
mod var;

pub use fit::{fit_model, ModelFamily};
pub use rolling::{rolling_backtest, BacktestReport, BetaBacktest};
pub use var::{empirical_quantile, kupiec_pof, simulate_var, violation_series, KupiecTest};

use crate::estimation::EstimationError;
use crate::models::ModelError;
use crate::portfolio::PortfolioError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BacktestError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error(transparent)]
    Portfolio(#[from] PortfolioError),
    #[error(transparent)]
    Dist(#[from] crate::dist::DistError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("empty sample")]
    EmptySample,
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid counts: {0}")]
    InvalidCounts(String),
    #[error("need {needed} return observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, BacktestError>;

/// How simulated factor draws map to losses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Revaluation {
    Full,
    Quadratic,
}

impl std::str::FromStr for Revaluation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(Revaluation::Full),
            "quad" | "quadratic" => Ok(Revaluation::Quadratic),
            other => Err(format!("unknown revaluation mode {other:?}")),
        }
    }
}

/// Monte Carlo and rolling-window configuration.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct VarConfig {
    /// Confidence levels, each in (0, 1).
    pub betas: Vec<f64>,
    /// Monte Carlo paths per VaR estimate.
    pub paths: usize,
    /// Rolling estimation window length.
    pub window: usize,
    pub revaluation: Revaluation,
    pub seed: u64,
    /// Refit cadence in days (1 = every day).
    pub refit_every: usize,
    /// Risk-free rate used to price the synthetic option book.
    pub rate: f64,
    /// Spot every underlying is normalized to when the book is struck.
    pub base_spot: f64,
    /// Currency value of each stock leg in the preset strategies.
    pub stock_value: f64,
}

impl Default for VarConfig {
    fn default() -> Self {
        Self {
            betas: vec![0.95, 0.99],
            paths: 20_000,
            window: 250,
            revaluation: Revaluation::Full,
            seed: 7_193_041,
            refit_every: 1,
            rate: 0.03,
            base_spot: 100.0,
            stock_value: 100.0,
        }
    }
}

impl VarConfig {
    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.betas.iter().any(|b| !(*b > 0.0 && *b < 1.0)) {
            return Err(BacktestError::InvalidConfig(
                "confidence levels must lie in (0, 1)".into(),
            ));
        }
        if self.paths < 1000 {
            return Err(BacktestError::InvalidConfig(format!(
                "need at least 1000 Monte Carlo paths, got {}",
                self.paths
            )));
        }
        if self.window < 50 {
            return Err(BacktestError::InvalidConfig(format!(
                "rolling window must cover at least 50 observations, got {}",
                self.window
            )));
        }
        if self.refit_every == 0 {
            return Err(BacktestError::InvalidConfig("refit cadence must be positive".into()));
        }
        if !(self.base_spot > 0.0) || !(self.stock_value > 0.0) {
            return Err(BacktestError::InvalidConfig(
                "base spot and stock value must be positive".into(),
            ));
        }
        if !self.rate.is_finite() {
            return Err(BacktestError::InvalidConfig("rate must be finite".into()));
        }
        Ok(())
    }
}
