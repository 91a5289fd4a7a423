//! Replication experiments: statements about estimator variances and Monte
//! Carlo error scaling that only show up across repeated runs.

mod common;

use heavytail::backtest::{simulate_var, VarConfig};
use heavytail::estimation::{
    estimate_pair_correlation, stable_like_asymptotic_variance, FracMomentConfig,
};
use heavytail::models::{DispersionMatrix, GaussianModel, RiskFactorModel, StableLikeModel};
use heavytail::portfolio::LossFunction;
use heavytail::RngState;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn pair_estimator_variance_scales_like_the_delta_method() {
    // 200 replications at n = 2000: the sample variance of q_hat should

    // land within 20% of the asymptotic value v / n
    let (alpha, p, q, n, reps) = (1.6, 0.25, 0.4, 2000usize, 200usize);
    let corr = DMatrix::from_row_slice(2, 2, &[1.0, q, q, 1.0]);
    let model = StableLikeModel::from_correlation(
        vec![alpha, alpha],
        vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        &corr,
    )
    .unwrap();
    let cfg = FracMomentConfig { p, ..FracMomentConfig::default() };
    let base = RngState::new(2024);
    let mut estimates = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut rng = base.substream(rep as u64);
        let sample = model.sample(n, &mut rng).unwrap();
        let x1: Vec<f64> = sample.column(0).iter().cloned().collect();
        let x2: Vec<f64> = sample.column(1).iter().cloned().collect();
        let (qhat, _) = estimate_pair_correlation(
            &x1,
            &x2,
            alpha,
            alpha,
            FRAC_1_SQRT_2,
            FRAC_1_SQRT_2,
            &cfg,
        )
        .unwrap();
        estimates.push(qhat);
    }
    let mean = estimates.iter().sum::<f64>() / reps as f64;
    let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
    let asymptotic = stable_like_asymptotic_variance(q, p, alpha, alpha).unwrap() / n as f64;
    let ratio = var / asymptotic;
    // the 20% band is itself noisy at 200 replications (chi-square spread
    // of a variance estimate is ~10% one sigma), so this is a strong check
    assert!(
        (0.8..=1.25).contains(&ratio),
        "empirical {var:.3e} vs asymptotic {asymptotic:.3e} (ratio {ratio:.2})"
    );
}

#[test]
fn doubling_paths_shrinks_the_var_spread_by_sqrt_two() {
    // order-statistic asymptotics: quantile noise scales like 1/sqrt(M)
    let model = RiskFactorModel::Gaussian(
        GaussianModel::new(DispersionMatrix::identity(1)).unwrap(),
    );
    let loss = LossFunction::Quadratic(heavytail::portfolio::QuadraticLossCoefficients {
        constant: 0.0,
        delta: DVector::from_row_slice(&[1.0]),
        gamma: DMatrix::zeros(1, 1),
    });
    let spread = |paths: usize, salt: u64| -> f64 {
        let cfg = VarConfig { paths, betas: vec![0.95], ..VarConfig::default() };
        let reps = 100;
        let mut vars = Vec::with_capacity(reps);
        for r in 0..reps {
            let rng = RngState::new(salt + r as u64);
            vars.push(simulate_var(&model, &loss, &cfg, &rng, None).unwrap()[0]);
        }
        let (mean, _) = common::mean_and_se(&vars);
        (vars.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
    };
    let s1 = spread(2000, 9000);
    let s2 = spread(4000, 90_000);
    let ratio = s1 / s2;
    assert!(
        (1.15..=1.75).contains(&ratio),
        "spread ratio {ratio:.3}, expected near sqrt(2) = 1.414"
    );
}

#[test]
fn var_is_monotone_in_the_confidence_level() {
    let model = RiskFactorModel::Gaussian(
        GaussianModel::new(DispersionMatrix::identity(2)).unwrap(),
    );
    let loss = LossFunction::Quadratic(heavytail::portfolio::QuadraticLossCoefficients {
        constant: 0.5,
        delta: DVector::from_row_slice(&[1.0, -0.5]),
        gamma: DMatrix::from_row_slice(2, 2, &[0.2, 0.0, 0.0, 0.1]),
    });
    let cfg = VarConfig {
        paths: 50_000,
        betas: vec![0.9, 0.95, 0.975, 0.99],
        ..VarConfig::default()
    };
    let vars = simulate_var(&model, &loss, &cfg, &RngState::new(77), None).unwrap();
    for w in vars.windows(2) {
        assert!(w[1] >= w[0], "VaR not monotone: {vars:?}");
    }
}
