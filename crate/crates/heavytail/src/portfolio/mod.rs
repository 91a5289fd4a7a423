//! Portfolios and the loss mapping L = f(X).
//!
//! Risk factors X are daily log-returns: a shocked spot is S e^x and the
//! horizon is one trading day (1/252 years) of expiry decay. Losses are
//! signed so that positive values are losses. Two routes map factor draws
//! to losses:
//!
//! * full revaluation — reprice every position at the shocked spots and
//!   decayed expiries;
//! * the quadratic delta-gamma approximation — a second-order Taylor
//!   expansion of the loss in x, with coefficients assembled from the
//!   position Greeks via d/dx = S d/dS and d2/dx2 = S^2 d2/dS2 + S d/dS.

mod strategy;

pub use strategy::{LegTemplate, StrategyPreset, StrategyTemplate};

use crate::pricing::{self, MarketState, OptionSpec, PricingError};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One trading day in years; the default loss horizon.
pub const TRADING_DAY: f64 = 1.0 / 252.0;

#[derive(Debug, Error)]
pub enum PortfolioError {
    #[error(transparent)]
    Pricing(#[from] PricingError),
    #[error("invalid portfolio: {0}")]
    Invalid(String),
    #[error("dimension mismatch: expected {expected} risk factors, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, PortfolioError>;

/// What a position holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Instrument {
    Stock,
    Option(OptionSpec),
}

/// A signed holding in one instrument on one underlying.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Position {
    /// Index into the risk-factor vector.
    pub underlying: usize,
    /// Signed quantity (negative is short).
    pub quantity: f64,
    pub instrument: Instrument,
}

/// Positions plus the per-underlying valuation market.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Portfolio {
    positions: Vec<Position>,
    markets: Vec<MarketState>,
}

impl Portfolio {
    pub fn new(positions: Vec<Position>, markets: Vec<MarketState>) -> Result<Self> {
        if positions.is_empty() {
            return Err(PortfolioError::Invalid("no positions".into()));
        }
        if markets.is_empty() {
            return Err(PortfolioError::Invalid("no market states".into()));
        }
        for m in &markets {
            m.validate()?;
        }
        for (i, p) in positions.iter().enumerate() {
            if p.quantity == 0.0 || !p.quantity.is_finite() {
                return Err(PortfolioError::Invalid(format!(
                    "position {i} has quantity {}",
                    p.quantity
                )));
            }
            if p.underlying >= markets.len() {
                return Err(PortfolioError::Invalid(format!(
                    "position {i} references underlying {} of {}",
                    p.underlying,
                    markets.len()
                )));
            }
            if let Instrument::Option(spec) = &p.instrument {
                spec.validate()?;
            }
        }
        Ok(Self { positions, markets })
    }

    /// Number of risk factors (underlyings).
    pub fn dim(&self) -> usize {
        self.markets.len()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn markets(&self) -> &[MarketState] {
        &self.markets
    }

    pub fn base_spots(&self) -> Vec<f64> {
        self.markets.iter().map(|m| m.spot).collect()
    }

    /// Portfolio value at the given spots, with `elapsed` years of expiry
    /// decay applied to every option.
    pub fn value(&self, spots: &[f64], elapsed: f64) -> Result<f64> {
        if spots.len() != self.dim() {
            return Err(PortfolioError::DimensionMismatch {
                expected: self.dim(),
                got: spots.len(),
            });
        }
        let mut total = 0.0;
        for p in &self.positions {
            let spot = spots[p.underlying];
            total += p.quantity
                * match &p.instrument {
                    Instrument::Stock => spot,
                    Instrument::Option(spec) => {
                        let spec = spec.after(elapsed)?;
                        let market = self.markets[p.underlying].with_spot(spot);
                        pricing::price(&spec, &market)?.price
                    }
                };
        }
        Ok(total)
    }

    /// Loss over one horizon under log-return shocks x:
    /// L = V(now) - V(horizon, S e^x). Positive values are losses.
    pub fn loss_full_revaluation(&self, x: &[f64], horizon: f64) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(PortfolioError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let base = self.base_spots();
        let shocked: Vec<f64> = base.iter().zip(x).map(|(s, xi)| s * xi.exp()).collect();
        Ok(self.value(&base, 0.0)? - self.value(&shocked, horizon)?)
    }

    /// Second-order Taylor coefficients of the loss in the log-return
    /// shocks, taken at x = 0 on the horizon-decayed book.
    ///
    /// The constant term is the exact zero-shock loss (pure expiry decay),
    /// so the quadratic and full revaluation agree identically at x = 0.
    /// The gamma matrix is diagonal: every option here is written on a
    /// single underlying.
    pub fn delta_gamma_coefficients(&self, horizon: f64) -> Result<QuadraticLossCoefficients> {
        let d = self.dim();
        let base = self.base_spots();
        let constant = self.loss_full_revaluation(&vec![0.0; d], horizon)?;
        let mut value_delta = vec![0.0; d];
        let mut value_gamma = vec![0.0; d];
        for p in &self.positions {
            match &p.instrument {
                Instrument::Stock => value_delta[p.underlying] += p.quantity,
                Instrument::Option(spec) => {
                    let spec = spec.after(horizon)?;
                    let market = self.markets[p.underlying];
                    let quote = pricing::price(&spec, &market)?;
                    value_delta[p.underlying] += p.quantity * quote.delta;
                    value_gamma[p.underlying] += p.quantity * quote.gamma;
                }
            }
        }
        let mut delta = DVector::zeros(d);
        let mut gamma = DMatrix::zeros(d, d);
        for i in 0..d {
            let s = base[i];
            // d/dx = S d/dS and d2/dx2 = S^2 d2/dS2 + S d/dS at x = 0;
            // the loss sign flips both
            delta[i] = -s * value_delta[i];
            gamma[(i, i)] = -(s * s * value_gamma[i] + s * value_delta[i]);
        }
        Ok(QuadraticLossCoefficients { constant, delta, gamma })
    }
}

/// Loss = constant + <delta, x> + (1/2) <gamma x, x>.
#[derive(Debug, Clone)]
pub struct QuadraticLossCoefficients {
    pub constant: f64,
    pub delta: DVector<f64>,
    pub gamma: DMatrix<f64>,
}

impl QuadraticLossCoefficients {
    pub fn dim(&self) -> usize {
        self.delta.len()
    }

    pub fn loss(&self, x: &[f64]) -> Result<f64> {
        let d = self.dim();
        if x.len() != d {
            return Err(PortfolioError::DimensionMismatch { expected: d, got: x.len() });
        }
        let mut linear = 0.0;
        let mut quad = 0.0;
        for i in 0..d {
            linear += self.delta[i] * x[i];
            for j in 0..d {
                quad += x[i] * self.gamma[(i, j)] * x[j];
            }
        }
        Ok(self.constant + linear + 0.5 * quad)
    }
}

/// The loss mapping handed to the Monte Carlo engine: full revaluation or
/// the quadratic approximation.
#[derive(Debug, Clone)]
pub enum LossFunction {
    Full { portfolio: Portfolio, horizon: f64 },
    Quadratic(QuadraticLossCoefficients),
}

impl LossFunction {
    pub fn full(portfolio: Portfolio) -> Self {
        LossFunction::Full { portfolio, horizon: TRADING_DAY }
    }

    pub fn quadratic(portfolio: &Portfolio) -> Result<Self> {
        Ok(LossFunction::Quadratic(portfolio.delta_gamma_coefficients(TRADING_DAY)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            LossFunction::Full { portfolio, .. } => portfolio.dim(),
            LossFunction::Quadratic(c) => c.dim(),
        }
    }

    pub fn loss(&self, x: &[f64]) -> Result<f64> {
        match self {
            LossFunction::Full { portfolio, horizon } => {
                portfolio.loss_full_revaluation(x, *horizon)
            }
            LossFunction::Quadratic(c) => c.loss(x),
        }
    }
}
