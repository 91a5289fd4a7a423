//! Vanilla Black-Scholes prices and sensitivities.

use super::{MarketState, OptionKind, OptionSpec, PriceAndGreeks, PricingError, Result};
use crate::dist::{normal_cdf, normal_pdf};

pub(crate) struct D12 {
    pub d1: f64,
    pub d2: f64,
}

/// d1 = [ln(S/K) + (r + sigma^2/2) T] / (sigma sqrt(T)), d2 = d1 - sigma sqrt(T).
pub(crate) fn d12(spot: f64, strike: f64, rate: f64, vol: f64, expiry: f64) -> D12 {
    let sq = vol * expiry.sqrt();
    let d1 = ((spot / strike).ln() + (rate + 0.5 * vol * vol) * expiry) / sq;
    D12 { d1, d2: d1 - sq }
}

/// Call quote at explicit inputs (used by the barrier reflections, which
/// price vanillas at shifted spots and strikes).
pub(crate) fn call_quote(
    spot: f64,
    strike: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
) -> PriceAndGreeks {
    let D12 { d1, d2 } = d12(spot, strike, rate, vol, expiry);
    let disc = (-rate * expiry).exp();
    PriceAndGreeks {
        price: spot * normal_cdf(d1) - strike * disc * normal_cdf(d2),
        delta: normal_cdf(d1),
        gamma: normal_pdf(d1) / (spot * vol * expiry.sqrt()),
        theta: spot * normal_pdf(d1) * vol / (2.0 * expiry.sqrt())
            + rate * strike * disc * normal_cdf(d2),
    }
}

/// Put quote at explicit inputs.
pub(crate) fn put_quote(
    spot: f64,
    strike: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
) -> PriceAndGreeks {
    let D12 { d1, d2 } = d12(spot, strike, rate, vol, expiry);
    let disc = (-rate * expiry).exp();
    PriceAndGreeks {
        price: strike * disc * normal_cdf(-d2) - spot * normal_cdf(-d1),
        delta: normal_cdf(d1) - 1.0,
        gamma: normal_pdf(d1) / (spot * vol * expiry.sqrt()),
        theta: spot * normal_pdf(d1) * vol / (2.0 * expiry.sqrt())
            - rate * strike * disc * normal_cdf(-d2),
    }
}

/// Vanilla call or put per the spec.
pub fn bs_vanilla(spec: &OptionSpec, market: &MarketState) -> Result<PriceAndGreeks> {
    spec.validate()?;
    market.validate()?;
    match spec.kind {
        OptionKind::Call => Ok(call_quote(
            market.spot,
            spec.strike,
            market.rate,
            market.vol,
            spec.expiry,
        )),
        OptionKind::Put => Ok(put_quote(
            market.spot,
            spec.strike,
            market.rate,
            market.vol,
            spec.expiry,
        )),
        other => Err(PricingError::WrongKind(other)),
    }
}
