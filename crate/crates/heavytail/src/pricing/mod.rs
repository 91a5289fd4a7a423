//! Closed-form option prices and sensitivities.
//!
//! Standard Black-Scholes for vanilla calls and puts, the reflection
//! formulas for single-barrier options (knock-ins priced via the reflected
//! vanilla, knock-outs by in-out parity), and cash-or-nothing binaries.
//! Every price comes with Delta, Gamma and Theta — the inputs of the
//! delta-gamma loss approximation.
//!
//! Conventions: `theta` is the derivative with respect to time to expiry
//! (a longer-dated option is usually worth more). Knocked barrier inputs
//! (spot already beyond the barrier) are not an error: backtest paths cross
//! barriers between rebalances, so such positions price as the vanilla
//! (knocked in) or as zero (knocked out), with the state reported.

mod barrier;
mod binary;
mod black_scholes;

pub use barrier::{barrier_price, BarrierState};
pub use binary::cash_or_nothing_price;
pub use black_scholes::bs_vanilla;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PricingError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("option kind {0:?} is not valid here")]
    WrongKind(OptionKind),
}

pub type Result<T> = std::result::Result<T, PricingError>;

/// Payoff family of a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptionKind {
    Call,
    Put,
    DownAndInCall,
    DownAndInPut,
    DownAndOutCall,
    DownAndOutPut,
    UpAndInCall,
    UpAndInPut,
    UpAndOutCall,
    UpAndOutPut,
    CashOrNothingCall,
    CashOrNothingPut,
}

impl OptionKind {
    pub fn is_barrier(self) -> bool {
        use OptionKind::*;
        matches!(
            self,
            DownAndInCall
                | DownAndInPut
                | DownAndOutCall
                | DownAndOutPut
                | UpAndInCall
                | UpAndInPut
                | UpAndOutCall
                | UpAndOutPut
        )
    }

    pub fn is_binary(self) -> bool {
        matches!(self, OptionKind::CashOrNothingCall | OptionKind::CashOrNothingPut)
    }

    pub fn is_down_barrier(self) -> bool {
        use OptionKind::*;
        matches!(self, DownAndInCall | DownAndInPut | DownAndOutCall | DownAndOutPut)
    }

    pub fn is_knock_in(self) -> bool {
        use OptionKind::*;
        matches!(self, DownAndInCall | DownAndInPut | UpAndInCall | UpAndInPut)
    }

    pub fn is_call_payoff(self) -> bool {
        use OptionKind::*;
        matches!(
            self,
            Call | DownAndInCall | DownAndOutCall | UpAndInCall | UpAndOutCall | CashOrNothingCall
        )
    }
}

/// Contract terms. `barrier` is required for barrier kinds (and must sit
/// below the strike — the regime the reflection formulas cover); `cash` is
/// the payout of the binary kinds, defaulting to one unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub barrier: Option<f64>,
    /// Time to expiry in years.
    pub expiry: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cash: Option<f64>,
}

impl OptionSpec {
    pub fn vanilla(kind: OptionKind, strike: f64, expiry: f64) -> Result<Self> {
        let spec = Self { kind, strike, barrier: None, expiry, cash: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn barrier(kind: OptionKind, strike: f64, barrier: f64, expiry: f64) -> Result<Self> {
        let spec = Self { kind, strike, barrier: Some(barrier), expiry, cash: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn binary(kind: OptionKind, strike: f64, cash: f64, expiry: f64) -> Result<Self> {
        let spec = Self { kind, strike, barrier: None, expiry, cash: Some(cash) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0) {
            return Err(PricingError::InvalidParameter(format!(
                "strike must be positive, got {}",
                self.strike
            )));
        }
        if !(self.expiry > 0.0) {
            return Err(PricingError::InvalidParameter(format!(
                "time to expiry must be positive, got {}",
                self.expiry
            )));
        }
        if self.kind.is_barrier() {
            match self.barrier {
                None => {
                    return Err(PricingError::InvalidParameter(
                        "barrier kinds need a barrier level".into(),
                    ))
                }
                Some(h) => {
                    if !(h > 0.0) {
                        return Err(PricingError::InvalidParameter(format!(
                            "barrier must be positive, got {h}"
                        )));
                    }
                    if h >= self.strike {
                        return Err(PricingError::InvalidParameter(format!(
                            "the reflection formulas require barrier < strike, got H = {h}, K = {}",
                            self.strike
                        )));
                    }
                }
            }
        } else if self.barrier.is_some() {
            return Err(PricingError::InvalidParameter(
                "only barrier kinds carry a barrier level".into(),
            ));
        }
        if let Some(cash) = self.cash {
            if !self.kind.is_binary() {
                return Err(PricingError::InvalidParameter(
                    "only cash-or-nothing kinds carry a cash amount".into(),
                ));
            }
            if !(cash > 0.0) {
                return Err(PricingError::InvalidParameter(format!(
                    "cash payout must be positive, got {cash}"
                )));
            }
        }
        Ok(())
    }

    /// A copy with the expiry shortened by `elapsed` years.
    pub fn after(&self, elapsed: f64) -> Result<Self> {
        let mut spec = *self;
        spec.expiry -= elapsed;
        if !(spec.expiry > 0.0) {
            return Err(PricingError::InvalidParameter(format!(
                "option expired: {} years left after {elapsed} elapsed",
                self.expiry
            )));
        }
        Ok(spec)
    }
}

/// Market inputs for one underlying.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub spot: f64,
    /// Continuously compounded risk-free rate, per annum.
    pub rate: f64,
    /// Volatility, per annum.
    pub vol: f64,
}

impl MarketState {
    pub fn new(spot: f64, rate: f64, vol: f64) -> Result<Self> {
        let m = Self { spot, rate, vol };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot > 0.0) {
            return Err(PricingError::InvalidParameter(format!(
                "spot must be positive, got {}",
                self.spot
            )));
        }
        if !(self.vol > 0.0) {
            return Err(PricingError::InvalidParameter(format!(
                "volatility must be positive, got {}",
                self.vol
            )));
        }
        if !self.rate.is_finite() {
            return Err(PricingError::InvalidParameter("rate must be finite".into()));
        }
        Ok(())
    }

    pub fn with_spot(&self, spot: f64) -> Self {
        Self { spot, ..*self }
    }
}

/// Price and first sensitivities: Delta = d/dS, Gamma = d2/dS2,
/// Theta = d/dT (time to expiry).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PriceAndGreeks {
    pub price: f64,
    pub delta: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl PriceAndGreeks {
    pub(crate) fn zero() -> Self {
        Self::default()
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            price: factor * self.price,
            delta: factor * self.delta,
            gamma: factor * self.gamma,
            theta: factor * self.theta,
        }
    }
}

impl std::ops::Add for PriceAndGreeks {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            price: self.price + rhs.price,
            delta: self.delta + rhs.delta,
            gamma: self.gamma + rhs.gamma,
            theta: self.theta + rhs.theta,
        }
    }
}

impl std::ops::Sub for PriceAndGreeks {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            price: self.price - rhs.price,
            delta: self.delta - rhs.delta,
            gamma: self.gamma - rhs.gamma,
            theta: self.theta - rhs.theta,
        }
    }
}

/// Price any supported option kind (barrier state discarded).
pub fn price(spec: &OptionSpec, market: &MarketState) -> Result<PriceAndGreeks> {
    spec.validate()?;
    market.validate()?;
    if spec.kind.is_barrier() {
        Ok(barrier_price(spec, market)?.0)
    } else if spec.kind.is_binary() {
        cash_or_nothing_price(spec, market)
    } else {
        bs_vanilla(spec, market)
    }
}
