//! Cash-or-nothing binaries: Z e^{-rT} Phi(+-d2) and their sensitivities.

use super::black_scholes::{d12, D12};
use super::{MarketState, OptionKind, OptionSpec, PriceAndGreeks, PricingError, Result};
use crate::dist::{normal_cdf, normal_pdf};

/// Cash-or-nothing call or put paying `cash` (default 1) at expiry.
pub fn cash_or_nothing_price(spec: &OptionSpec, market: &MarketState) -> Result<PriceAndGreeks> {
    spec.validate()?;
    market.validate()?;
    let call = match spec.kind {
        OptionKind::CashOrNothingCall => true,
        OptionKind::CashOrNothingPut => false,
        other => return Err(PricingError::WrongKind(other)),
    };
    let (s, k, r, v, t) = (
        market.spot,
        spec.strike,
        market.rate,
        market.vol,
        spec.expiry,
    );
    let z = spec.cash.unwrap_or(1.0);
    let D12 { d1: _, d2 } = d12(s, k, r, v, t);
    let disc = (-r * t).exp();
    let sq = v * t.sqrt();
    // d(d2)/dT; the ln(S/K) term flips sign relative to the drift term
    let d2_dt = -(s / k).ln() / (2.0 * v * t.powf(1.5)) + (r - 0.5 * v * v) / (2.0 * sq);
    let density = normal_pdf(d2);
    let sign = if call { 1.0 } else { -1.0 };
    Ok(PriceAndGreeks {
        price: z * disc * normal_cdf(sign * d2),
        delta: sign * z * disc * density / (s * sq),
        // d1 = d2 + sigma sqrt(T) shows up when differentiating delta
        gamma: -sign * z * disc * density * (d2 + sq) / (s * s * sq * sq),
        theta: z * (-r * disc * normal_cdf(sign * d2) + sign * disc * density * d2_dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn quote(kind: OptionKind, market: &MarketState) -> PriceAndGreeks {
        let spec = OptionSpec::binary(kind, 100.0, 1.0, 0.5).unwrap();
        cash_or_nothing_price(&spec, market).unwrap()
    }

    #[test]
    fn digital_pair_sums_to_the_discount_factor() {
        for &(s, r, v) in &[(100.0, 0.0, 0.2), (80.0, 0.05, 0.4), (130.0, -0.01, 0.15)] {
            let m = MarketState::new(s, r, v).unwrap();
            let c = quote(OptionKind::CashOrNothingCall, &m);
            let p = quote(OptionKind::CashOrNothingPut, &m);
            assert_abs_diff_eq!(c.price + p.price, (-r * 0.5f64).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn atm_put_reference_value() {
        // S = K, r = 0: d2 = -sigma sqrt(T)/2, so P = Phi(sigma sqrt(T)/2)
        let m = MarketState::new(100.0, 0.0, 0.2).unwrap();
        let p = quote(OptionKind::CashOrNothingPut, &m);
        assert_abs_diff_eq!(p.price, 0.5281859888985083, epsilon = 1e-10);
        assert_abs_diff_eq!(p.price, normal_cdf(0.2 * 0.5f64.sqrt() / 2.0), epsilon = 1e-14);
    }

    #[test]
    fn deep_strike_limits() {
        // K -> 0: the call pays for sure
        let m = MarketState::new(100.0, 0.03, 0.2).unwrap();
        let spec = OptionSpec::binary(OptionKind::CashOrNothingCall, 1e-6, 1.0, 0.5).unwrap();
        let q = cash_or_nothing_price(&spec, &m).unwrap();
        assert_abs_diff_eq!(q.price, (-0.03f64 * 0.5).exp(), epsilon = 1e-12);
    }

    #[test]
    fn cash_amount_scales_linearly()  {
        let m = MarketState::new(100.0, 0.02, 0.3).unwrap();
        let unit = OptionSpec::binary(OptionKind::CashOrNothingPut, 100.0, 1.0, 0.5).unwrap();
        let hundred = OptionSpec::binary(OptionKind::CashOrNothingPut, 100.0, 100.0, 0.5).unwrap();
        let a = cash_or_nothing_price(&unit, &m).unwrap();
        let b = cash_or_nothing_price(&hundred, &m).unwrap();
        assert_abs_diff_eq!(b.price, 100.0 * a.price, epsilon = 1e-10);
        assert_abs_diff_eq!(b.gamma, 100.0 * a.gamma, epsilon = 1e-10);
    }

    #[test]
    fn greeks_match_finite_differences() {
        for kind in [OptionKind::CashOrNothingCall, OptionKind::CashOrNothingPut] {
            let m = MarketState::new(95.0, 0.03, 0.25).unwrap();
            let spec = OptionSpec::binary(kind, 100.0, 1.0, 0.5).unwrap();
            let q = cash_or_nothing_price(&spec, &m).unwrap();
            let ds = 95.0 * 1e-5;
            let up = cash_or_nothing_price(&spec, &m.with_spot(95.0 + ds)).unwrap().price;
            let dn = cash_or_nothing_price(&spec, &m.with_spot(95.0 - ds)).unwrap().price;
            assert!(((up - dn) / (2.0 * ds) - q.delta).abs() < 1e-7, "{kind:?} delta");
            assert!(
                ((up - 2.0 * q.price + dn) / (ds * ds) - q.gamma).abs() / (1.0 + q.gamma.abs())
                    < 1e-4,
                "{kind:?} gamma"
            );
            let dt = 0.5 * 1e-5;
            let sp = OptionSpec { expiry: 0.5 + dt, ..spec };
            let sm = OptionSpec { expiry: 0.5 - dt, ..spec };
            let fd_theta = (cash_or_nothing_price(&sp, &m).unwrap().price
                - cash_or_nothing_price(&sm, &m).unwrap().price)
                / (2.0 * dt);
            assert!(
                (q.theta - fd_theta).abs() / (1.0 + q.theta.abs()) < 1e-6,
                "{kind:?} theta {} vs {fd_theta}",
                q.theta
            );
        }
    }
}
