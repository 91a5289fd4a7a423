//! Shared oracles for the integration suites: independent reference
//! computations that never touch the implementation paths they check.

#![allow(dead_code)]

use heavytail::RngState;

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max((f - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// 5% two-sided KS critical value (asymptotic).
pub fn ks_critical_5pct(n: usize) -> f64 {
    1.358 / (n as f64).sqrt()
}

/// Central band [lo, hi] of Binomial(n, p) holding at least `mass`
/// probability, via the exact CDF.
pub fn binomial_central_band(n: usize, p: f64, mass: f64) -> (usize, usize) {
    use statrs::distribution::{Binomial, DiscreteCDF};
    let b = Binomial::new(p, n as u64).unwrap();
    let tail = (1.0 - mass) / 2.0;
    let lo = b.inverse_cdf(tail);
    let hi = b.inverse_cdf(1.0 - tail);
    (lo as usize, hi as usize)
}

/// Down-and-in call price by Monte Carlo over the terminal lognormal with
/// the Brownian-bridge crossing probability attached to each path.
/// Returns (estimate, standard error).
pub fn down_and_in_call_mc(
    spot: f64,
    strike: f64,
    barrier: f64,
    rate: f64,
    vol: f64,
    expiry: f64,
    paths: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = RngState::new(seed);
    let drift = (rate - 0.5 * vol * vol) * expiry;
    let sq = vol * expiry.sqrt();
    let disc = (-rate * expiry).exp();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..paths {
        let z = rng.standard_normal();
        let terminal = spot * (drift + sq * z).exp();
        let payoff = (terminal - strike).max(0.0);
        let value = if payoff == 0.0 {
            0.0
        } else if terminal <= barrier || spot <= barrier {
            disc * payoff
        } else {
            // conditional probability that the bridge from spot to the
            // terminal value dipped below the barrier
            let cross = (-2.0 * (spot / barrier).ln() * (terminal / barrier).ln()
                / (vol * vol * expiry))
                .exp();
            disc * payoff * cross
        };
        sum += value;
        sumsq += value * value;
    }
    let n = paths as f64;
    let mean = sum / n;
    let se = ((sumsq / n - mean * mean) / n).sqrt();
    (mean, se)
}

/// Mean and standard error of a slice.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
