//! Strategy templates: portfolios described relative to the market.
//!
//! A template fixes quantities and contract rules (at-the-money strikes,
//! barrier as a fraction of spot, cash payout equal to the strike) and is
//! instantiated against concrete spots and volatilities at each valuation
//! date. Three presets ship: a long option overlay, a short overlay, and
//! the exotic overlay with down-and-out calls and cash-or-nothing puts.

use super::{Instrument, Portfolio, PortfolioError, Position, Result};
use crate::pricing::{MarketState, OptionKind, OptionSpec};
use serde::{Deserialize, Serialize};

/// The named test strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyPreset {
    /// Long 10 calls and 5 puts per asset.
    Nll,
    /// Short 5 calls and 10 puts per asset.
    Nls,
    /// Short 10 down-and-out calls (barrier 95% of spot) and 5
    /// cash-or-nothing puts paying the strike.
    Nldc,
}

impl std::str::FromStr for StrategyPreset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "nll" => Ok(StrategyPreset::Nll),
            "nls" => Ok(StrategyPreset::Nls),
            "nldc" => Ok(StrategyPreset::Nldc),
            other => Err(format!("unknown strategy preset {other:?}")),
        }
    }
}

/// What one template leg holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LegInstrument {
    Stock,
    Call,
    Put,
    DownAndOutCall,
    DownAndInCall,
    CashOrNothingPut,
    CashOrNothingCall,
}

/// One leg of a strategy template.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LegTemplate {
    pub underlying: usize,
    /// Contract count for options; ignored for stock legs sized by value.
    #[serde(default)]
    pub quantity: Option<f64>,
    /// Currency value of a stock leg (equally value-weighted books set the
    /// same value on every asset).
    #[serde(default)]
    pub value: Option<f64>,
    pub instrument: LegInstrument,
    /// Only "atm" is supported: strike = spot at instantiation.
    #[serde(default = "default_strike_rule")]
    pub strike_rule: String,
    #[serde(default = "default_expiry_months")]
    pub expiry_months: f64,
    /// Barrier as a fraction of spot, for barrier kinds.
    #[serde(default)]
    pub barrier_pct: Option<f64>,
    /// Cash payout of binary kinds; defaults to the strike.
    #[serde(default)]
    pub cash: Option<f64>,
}

fn default_strike_rule() -> String {
    "atm".into()
}

fn default_expiry_months() -> f64 {
    6.0
}

/// A portfolio described by rules instead of absolute contract terms.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyTemplate {
    pub legs: Vec<LegTemplate>,
}

impl StrategyTemplate {
    /// The named presets over `d` underlyings, with `stock_value` currency
    /// units of stock per asset.
    pub fn preset(preset: StrategyPreset, d: usize, stock_value: f64) -> Self {
        let mut legs = Vec::new();
        for k in 0..d {
            legs.push(LegTemplate {
                underlying: k,
                quantity: None,
                value: Some(stock_value),
                instrument: LegInstrument::Stock,
                strike_rule: default_strike_rule(),
                expiry_months: 6.0,
                barrier_pct: None,
                cash: None,
            });
            let option_leg = |instrument: LegInstrument, quantity: f64| LegTemplate {
                underlying: k,
                quantity: Some(quantity),
                value: None,
                instrument,
                strike_rule: default_strike_rule(),
                expiry_months: 6.0,
                barrier_pct: matches!(instrument, LegInstrument::DownAndOutCall)
                    .then_some(0.95),
                cash: None,
            };
            match preset {
                StrategyPreset::Nll => {
                    legs.push(option_leg(LegInstrument::Call, 10.0));
                    legs.push(option_leg(LegInstrument::Put, 5.0));
                }
                StrategyPreset::Nls => {
                    legs.push(option_leg(LegInstrument::Call, -5.0));
                    legs.push(option_leg(LegInstrument::Put, -10.0));
                }
                StrategyPreset::Nldc => {
                    legs.push(option_leg(LegInstrument::DownAndOutCall, -10.0));
                    legs.push(option_leg(LegInstrument::CashOrNothingPut, -5.0));
                }
            }
        }
        Self { legs }
    }

    /// Number of underlyings the template references.
    pub fn dim(&self) -> usize {
        self.legs.iter().map(|l| l.underlying + 1).max().unwrap_or(0)
    }

    /// Build a concrete portfolio at the given spots and volatilities.
    pub fn instantiate(&self, spots: &[f64], vols: &[f64], rate: f64) -> Result<Portfolio> {
        let d = self.dim();
        if spots.len() < d || vols.len() < d {
            return Err(PortfolioError::DimensionMismatch {
                expected: d,
                got: spots.len().min(vols.len()),
            });
        }
        let markets: Vec<MarketState> = spots
            .iter()
            .zip(vols)
            .map(|(&s, &v)| MarketState::new(s, rate, v))
            .collect::<crate::pricing::Result<_>>()?;
        let mut positions = Vec::with_capacity(self.legs.len());
        for (i, leg) in self.legs.iter().enumerate() {
            if leg.strike_rule != "atm" {
                return Err(PortfolioError::Invalid(format!(
                    "leg {i}: unsupported strike rule {:?}",
                    leg.strike_rule
                )));
            }
            let spot = spots[leg.underlying];
            let strike = spot; // at the money
            let expiry = leg.expiry_months / 12.0;
            let instrument = match leg.instrument {
                LegInstrument::Stock => Instrument::Stock,
                LegInstrument::Call => {
                    Instrument::Option(OptionSpec::vanilla(OptionKind::Call, strike, expiry)?)
                }
                LegInstrument::Put => {
                    Instrument::Option(OptionSpec::vanilla(OptionKind::Put, strike, expiry)?)
                }
                LegInstrument::DownAndOutCall | LegInstrument::DownAndInCall => {
                    let pct = leg.barrier_pct.unwrap_or(0.95);
                    if !(pct > 0.0 && pct < 1.0) {
                        return Err(PortfolioError::Invalid(format!(
                            "leg {i}: barrier fraction {pct} outside (0, 1)"
                        )));
                    }
                    let kind = if matches!(leg.instrument, LegInstrument::DownAndOutCall) {
                        OptionKind::DownAndOutCall
                    } else {
                        OptionKind::DownAndInCall
                    };
                    Instrument::Option(OptionSpec::barrier(kind, strike, pct * spot, expiry)?)
                }
                LegInstrument::CashOrNothingPut | LegInstrument::CashOrNothingCall => {
                    let kind = if matches!(leg.instrument, LegInstrument::CashOrNothingPut) {
                        OptionKind::CashOrNothingPut
                    } else {
                        OptionKind::CashOrNothingCall
                    };
                    // cash payout equal to the strike unless overridden
                    Instrument::Option(OptionSpec::binary(
                        kind,
                        strike,
                        leg.cash.unwrap_or(strike),
                        expiry,
                    )?)
                }
            };
            let quantity = match (leg.quantity, leg.value, &instrument) {
                (_, Some(v), Instrument::Stock) => v / spot,
                (Some(q), None, _) => q,
                (None, None, Instrument::Stock) => {
                    return Err(PortfolioError::Invalid(format!(
                        "leg {i}: stock legs need either a quantity or a value"
                    )))
                }
                (None, _, _) => {
                    return Err(PortfolioError::Invalid(format!(
                        "leg {i}: option legs need a quantity"
                    )))
                }
                (Some(_), Some(_), _) => {
                    return Err(PortfolioError::Invalid(format!(
                        "leg {i}: quantity and value are mutually exclusive"
                    )))
                }
            };
            positions.push(Position { underlying: leg.underlying, quantity, instrument });
        }
        Portfolio::new(positions, markets)
    }
}
