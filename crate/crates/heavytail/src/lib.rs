//! Multivariate heavy-tailed risk-factor models for Monte Carlo
//! Value-at-Risk.
//!
//! The crate covers the full pipeline for option-bearing portfolios:
//!
//! * [`dist`] — univariate numerics: symmetric alpha-stable laws
//!   (density, CDF, quantile, exact sampling, offline interpolation grid),
//!   the positive stable subordinator, Student's t and chi-square.
//! * [`models`] — four multivariate families with per-coordinate tail
//!   indices: stable-like and t-like variance mixtures, and meta-stable /
//!   meta-t laws built from elliptical copulas, plus a Gaussian benchmark.
//! * [`estimation`] — fractional-moment dispersion estimation with
//!   asymptotic and variance-stabilized confidence intervals, moment
//!   estimators for the t-like family, Kendall-tau dispersion estimation,
//!   marginal maximum likelihood and copula-parameter likelihoods.
//! * [`pricing`] — closed-form Black-Scholes prices and Delta/Gamma/Theta
//!   for vanilla, barrier and cash-or-nothing options.
//! * [`portfolio`] — positions, full-revaluation losses and the quadratic
//!   delta-gamma approximation.
//! * [`backtest`] — simulated VaR, rolling-window backtests and the Kupiec
//!   proportion-of-failures test.
//!
//! Everything that samples takes an explicit [`rng::RngState`]; a fixed seed
//! reproduces results exactly, including under the parallel Monte Carlo
//! paths.

pub mod backtest;
pub mod dist;
pub mod estimation;
pub mod models;
pub mod numeric;
pub mod portfolio;
pub mod pricing;
pub mod rng;

pub use rng::RngState;

// The book chapters double as documentation tests: every fenced Rust block
// in book/src is compiled and run by `cargo test --doc`.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/stable-numerics.md")]
    pub mod stable_numerics {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    pub mod estimation {}
    #[doc = include_str!("../../../book/src/pricing.md")]
    pub mod pricing {}
    #[doc = include_str!("../../../book/src/delta-gamma.md")]
    pub mod delta_gamma {}
    #[doc = include_str!("../../../book/src/backtesting.md")]
    pub mod backtesting {}
}
