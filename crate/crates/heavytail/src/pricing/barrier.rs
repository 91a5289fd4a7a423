//! Single-barrier options priced by the reflection identities.
//!
//! With lambda = 2r/sigma^2 - 1 and barrier H below the strike, the
//! knock-in prices are images of vanilla quotes at reflected arguments:
//!
//! ```text
//! C_di = (H/S)^lambda C(H^2/S, K)
//! P_di = C_di + (K/H) P(S, H) - (H/S)^lambda (H/K) C(KH/S, K^2/H)
//! C_ui = C
//! P_ui = (H/S)^lambda P(H^2/S, K)
//! ```
//!
//! and the knock-outs follow from in + out = vanilla. Every term is of the
//! form c S^{-lambda} V(b/S), so Delta and Gamma come from one chain-rule
//! expansion shared by all kinds; Theta passes straight through the inner
//! vanilla. A spot already beyond the barrier means the option has knocked:
//! ins price as vanillas, outs as zero.

use super::black_scholes::{call_quote, put_quote};
use super::{MarketState, OptionKind, OptionSpec, PriceAndGreeks, PricingError, Result};

/// Whether the barrier was already touched at valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BarrierState {
    Live,
    Knocked,
}

/// A term c S^{-lambda} V(u) with u = b / S, where V is a vanilla quote
/// evaluated at inner spot u. Expanding in S:
///
/// d/dS   = -c S^{-lambda-1} [lambda V + u V']
/// d2/dS2 =  c S^{-lambda-2} [lambda (lambda+1) V + 2 (lambda+1) u V' + u^2 V'']
fn reflected_term(
    c: f64,
    b: f64,
    spot: f64,
    lambda: f64,
    inner: PriceAndGreeks,
) -> PriceAndGreeks {
    let u = b / spot;
    let pow = spot.powf(-lambda);
    PriceAndGreeks {
        price: c * pow * inner.price,
        delta: -c * pow / spot * (lambda * inner.price + u * inner.delta),
        gamma: c * pow / (spot * spot)
            * (lambda * (lambda + 1.0) * inner.price
                + 2.0 * (lambda + 1.0) * u * inner.delta
                + u * u * inner.gamma),
        theta: c * pow * inner.theta,
    }
}

/// Knock-in quote for a live barrier.
fn knock_in_quote(kind: OptionKind, spec: &OptionSpec, market: &MarketState) -> PriceAndGreeks {
    let (s, k, r, v, t) = (
        market.spot,
        spec.strike,
        market.rate,
        market.vol,
        spec.expiry,
    );
    let h = spec.barrier.expect("validated barrier");
    let lambda = 2.0 * r / (v * v) - 1.0;
    match kind {
        OptionKind::DownAndInCall => {
            let inner = call_quote(h * h / s, k, r, v, t);
            reflected_term(h.powf(lambda), h * h, s, lambda, inner)
        }
        OptionKind::DownAndInPut => {
            let c_di = knock_in_quote(OptionKind::DownAndInCall, spec, market);
            let mid = put_quote(s, h, r, v, t).scaled(k / h);
            let refl = reflected_term(
                -h.powf(lambda) * h / k,
                k * h,
                s,
                lambda,
                call_quote(k * h / s, k * k / h, r, v, t),
            );
            c_di + mid + refl
        }
        OptionKind::UpAndInCall => call_quote(s, k, r, v, t),
        OptionKind::UpAndInPut => {
            let inner = put_quote(h * h / s, k, r, v, t);
            reflected_term(h.powf(lambda), h * h, s, lambda, inner)
        }
        _ => unreachable!("knock-in dispatch"),
    }
}

/// Price a barrier option, reporting whether it had already knocked.
pub fn barrier_price(spec: &OptionSpec, market: &MarketState) -> Result<(PriceAndGreeks, BarrierState)> {
    spec.validate()?;
    market.validate()?;
    if !spec.kind.is_barrier() {
        return Err(PricingError::WrongKind(spec.kind));
    }
    let h = spec.barrier.expect("validated barrier");
    let vanilla = || -> PriceAndGreeks {
        let quote = if spec.kind.is_call_payoff() {
            call_quote(market.spot, spec.strike, market.rate, market.vol, spec.expiry)
        } else {
            put_quote(market.spot, spec.strike, market.rate, market.vol, spec.expiry)
        };
        quote
    };
    let knocked = if spec.kind.is_down_barrier() {
        market.spot <= h
    } else {
        market.spot >= h
    };
    if knocked {
        // the contingency has resolved: ins are vanillas, outs are void
        let quote = if spec.kind.is_knock_in() { vanilla() } else { PriceAndGreeks::zero() };
        return Ok((quote, BarrierState::Knocked));
    }
    let in_kind = match spec.kind {
        OptionKind::DownAndInCall | OptionKind::DownAndOutCall => OptionKind::DownAndInCall,
        OptionKind::DownAndInPut | OptionKind::DownAndOutPut => OptionKind::DownAndInPut,
        OptionKind::UpAndInCall | OptionKind::UpAndOutCall => OptionKind::UpAndInCall,
        OptionKind::UpAndInPut | OptionKind::UpAndOutPut => OptionKind::UpAndInPut,
        _ => unreachable!(),
    };
    let quote_in = knock_in_quote(in_kind, spec, market);
    let quote = if spec.kind.is_knock_in() {
        quote_in
    } else {
        vanilla() - quote_in
    };
    Ok((quote, BarrierState::Live))
}
