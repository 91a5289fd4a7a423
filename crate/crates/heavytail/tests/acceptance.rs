//! Acceptance suite: one test per criterion, each printing its own
//! pass line (visible with `--nocapture`) and asserting both the numbers
//! and its runtime budget.
//!
//! Run with `cargo test -p heavytail --test acceptance`.

mod common;

use heavytail::backtest::{
    kupiec_pof, rolling_backtest, ModelFamily, Revaluation, VarConfig,
};
use heavytail::dist::{
    normal_cdf, stable_cdf, t_cdf, GridSpec, StableGrid,
};
use heavytail::estimation::{
    estimate_dispersion_meta, estimate_dispersion_stable_like, estimate_dispersion_t_like,
    fit_meta_stable_index, fit_meta_t_dof, signed_moment, stable_like_asymptotic_variance,
    t_like_asymptotic_variance, FracMomentConfig, VarianceStabilizer,
};
use heavytail::models::{
    CopulaDof, DispersionMatrix, GaussianModel, MetaStableModel, MetaTModel, StableLikeModel,
    TLikeModel,
};
use heavytail::portfolio::{StrategyPreset, StrategyTemplate, TRADING_DAY};
use heavytail::pricing::{
    barrier_price, bs_vanilla, cash_or_nothing_price, MarketState, OptionKind, OptionSpec,
};
use heavytail::RngState;
use nalgebra::DMatrix;
use std::time::Instant;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn unit_q(rho: f64) -> DispersionMatrix {
    DispersionMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, rho, rho, 1.0])).unwrap()
}

fn pass(name: &str, detail: String, started: Instant, budget_secs: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < budget_secs,
        "{name}: runtime {elapsed:.3}s exceeded the {budget_secs}s budget"
    );
    println!("{name}: PASS ({detail}; {elapsed:.3}s)");
}

#[test]
fn criterion_1_kupiec_reproduction() {
    let t0 = Instant::now();
    let a = kupiec_pof(204, 4286, 0.95).unwrap();
    let b = kupiec_pof(64, 4286, 0.99).unwrap();
    assert!(
        (0.52..=0.56).contains(&a.statistic),
        "LR(204/4286, 0.95) = {}",
        a.statistic
    );
    assert!(a.reliable);
    assert!(
        (8.9..=9.4).contains(&b.statistic),
        "LR(64/4286, 0.99) = {}",
        b.statistic
    );
    assert!(!b.reliable);
    pass(
        "criterion 1 (Kupiec reproduction)",
        format!("LR95 = {:.4}, LR99 = {:.4}", a.statistic, b.statistic),
        t0,
        0.001,
    );
}

#[test]
fn criterion_2_signed_moment_suite() {
    let t0 = Instant::now();
    let p = 0.5;
    // exact oddness pins the origin
    assert_eq!(signed_moment(0.0, p).unwrap(), 0.0);
    let near_one = signed_moment(0.99, p).unwrap();
    assert!((0.78..=0.7979).contains(&near_one), "f(0.99) = {near_one}");
    for i in 1..=50 {
        let q = 0.99 * i as f64 / 50.0;
        let odd = signed_moment(q, p).unwrap() + signed_moment(-q, p).unwrap();
        assert!(odd.abs() < 1e-10, "oddness at q = {q}: {odd}");
    }
    // monotone increasing, concave left of zero, convex right of it
    let h = 1e-3;
    let mut prev = signed_moment(-0.98, p).unwrap();
    for i in 1..=98 {
        let q = -0.98 + 1.96 * i as f64 / 98.0;
        let f = signed_moment(q, p).unwrap();
        assert!(f > prev, "monotonicity at q = {q}");
        prev = f;
    }
    for &q in &[-0.8, -0.4, -0.1] {
        let dd = signed_moment(q + h, p).unwrap() + signed_moment(q - h, p).unwrap()
            - 2.0 * signed_moment(q, p).unwrap();
        assert!(dd < 0.0, "concavity at q = {q}");
    }
    for &q in &[0.1, 0.4, 0.8] {
        let dd = signed_moment(q + h, p).unwrap() + signed_moment(q - h, p).unwrap()
            - 2.0 * signed_moment(q, p).unwrap();
        assert!(dd > 0.0, "convexity at q = {q}");
    }
    // quadrature against a 1e7-draw Monte Carlo oracle at 3 standard errors
    let q = 0.5;
    let n = 10_000_000usize;
    let mut rng = RngState::new(20_240_817);
    let s = (1.0 - q * q as f64).sqrt();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..n {
        let z1 = rng.standard_normal();
        let z2 = q * z1 + s * rng.standard_normal();
        let v = z1 * z2;
        let w = v.abs().sqrt() * v.signum();
        sum += w;
        sumsq += w * w;
    }
    let mc = sum / n as f64;
    let se = ((sumsq / n as f64 - mc * mc) / n as f64).sqrt();
    let quad = signed_moment(q, p).unwrap();
    assert!(
        (quad - mc).abs() < 3.0 * se,
        "quadrature {quad} vs Monte Carlo {mc} (se {se})"
    );
    pass(
        "criterion 2 (signed-moment suite)",
        format!("f(0.99) = {near_one:.4}, |quad - MC| = {:.2e} < 3 se", (quad - mc).abs()),
        t0,
        10.0,
    );
}

#[test]
fn criterion_3_estimator_roundtrips() {
    let t0 = Instant::now();
    // stable-like: q = 0.5, alphas (1.5, 1.7), n = 1e5, order p = 1/4 so
    // the delta-method variance is finite
    let q_true = 0.5;
    let (a1, a2) = (1.5, 1.7);
    let model = StableLikeModel::from_correlation(
        vec![a1, a2],
        vec![SQRT_HALF, SQRT_HALF],
        unit_q(q_true).matrix(),
    )
    .unwrap();
    let mut rng = RngState::new(31_337);
    let n = 100_000;
    let sample = model.sample(n, &mut rng).unwrap();
    let cfg = FracMomentConfig { p: 0.25, ..FracMomentConfig::default() };
    let (qhat, _) =
        estimate_dispersion_stable_like(&sample, &[a1, a2], &[SQRT_HALF, SQRT_HALF], &cfg)
            .unwrap();
    let q_est = qhat.matrix()[(0, 1)] / (2.0 * SQRT_HALF * SQRT_HALF);
    let v = stable_like_asymptotic_variance(q_true, 0.25, a1, a2).unwrap();
    let band = 3.0 * (v / n as f64).sqrt();
    assert!(
        (q_est - q_true).abs() < band,
        "stable-like: {q_est} vs {q_true} (band {band})"
    );

    // t-like: q = 0.5, nus (5, 8), n = 1e5
    let (nu1, nu2) = (5.0, 8.0);
    let tmodel = TLikeModel::new(vec![nu1, nu2], unit_q(q_true)).unwrap();
    let mut rng = RngState::new(90_210);
    let tsample = tmodel.sample(n, &mut rng);
    let (qhat_t, _) = estimate_dispersion_t_like(&tsample, &[nu1, nu2]).unwrap();
    let q_est_t = qhat_t.matrix()[(0, 1)]
        / (qhat_t.matrix()[(0, 0)] * qhat_t.matrix()[(1, 1)]).sqrt();
    let vt = t_like_asymptotic_variance(q_true, nu1, nu2).unwrap();
    let band_t = 3.0 * (vt / n as f64).sqrt();
    assert!(
        (q_est_t - q_true).abs() < band_t,
        "t-like: {q_est_t} vs {q_true} (band {band_t})"
    );

    // Kendall: meta-t with Q12 = 0.6 recovered within 0.03 at n = 2e4
    let meta = MetaTModel::new(
        CopulaDof::Finite(5.0),
        vec![5.0, 5.0],
        vec![1.0, 1.0],
        unit_q(0.6),
    )
    .unwrap();
    let mut rng = RngState::new(404);
    let msample = meta.sample(20_000, &mut rng);
    let (qhat_m, _) = estimate_dispersion_meta(&msample).unwrap();
    let q_est_m = qhat_m.matrix()[(0, 1)];
    assert!(
        (q_est_m - 0.6).abs() < 0.03,
        "Kendall dispersion: {q_est_m} vs 0.6"
    );
    pass(
        "criterion 3 (estimator roundtrips)",
        format!(
            "stable-like {q_est:.4} (band {band:.4}), t-like {q_est_t:.4} (band {band_t:.4}), Kendall {q_est_m:.4}"
        ),
        t0,
        60.0,
    );
}

#[test]
fn criterion_4_stabilized_interval_coverage() {
    let t0 = Instant::now();
    let (alpha, p, q_true, n, reps) = (1.8, 0.4, 0.4, 5000usize, 500usize);
    let stabilizer = VarianceStabilizer::new(p, alpha, alpha).unwrap();
    let model = StableLikeModel::from_correlation(
        vec![alpha, alpha],
        vec![SQRT_HALF, SQRT_HALF],
        unit_q(q_true).matrix(),
    )
    .unwrap();
    let cfg = FracMomentConfig { p, ..FracMomentConfig::default() };
    let mut covered = 0usize;
    let base = RngState::new(55_001);
    for rep in 0..reps {
        let mut rng = base.substream(rep as u64);
        let sample = model.sample(n, &mut rng).unwrap();
        let x1: Vec<f64> = sample.column(0).iter().cloned().collect();
        let x2: Vec<f64> = sample.column(1).iter().cloned().collect();
        let (qhat, _) = heavytail::estimation::estimate_pair_correlation(
            &x1, &x2, alpha, alpha, SQRT_HALF, SQRT_HALF, &cfg,
        )
        .unwrap();
        let (lo, hi) = stabilizer.interval(qhat, n, 0.95);
        if lo <= q_true && q_true <= hi {
            covered += 1;
        }
    }
    let rate = covered as f64 / reps as f64;
    assert!(
        (0.92..=0.98).contains(&rate),
        "coverage {rate} outside [0.92, 0.98]"
    );
    pass(
        "criterion 4 (stabilized interval coverage)",
        format!("coverage {rate:.3} over {reps} replications"),
        t0,
        300.0,
    );
}

#[test]
fn criterion_5_marginal_ks_all_families() {
    let t0 = Instant::now();
    let n = 10_000usize;
    let crit = common::ks_critical_5pct(n);
    let grid = StableGrid::build(&GridSpec::default()).unwrap();
    let mut checks: Vec<(String, f64)> = Vec::new();

    // stable-like
    let model = StableLikeModel::from_correlation(
        vec![1.5, 1.8],
        vec![SQRT_HALF, SQRT_HALF],
        unit_q(0.4).matrix(),
    )
    .unwrap();
    let sample = model.sample(n, &mut RngState::new(61)).unwrap();
    for (k, &alpha) in [1.5, 1.8].iter().enumerate() {
        let mut col: Vec<f64> = sample.column(k).iter().cloned().collect();
        let d = common::ks_statistic(&mut col, |x| {
            stable_cdf(x / SQRT_HALF, alpha).unwrap()
        });
        checks.push((format!("stable-like marginal {k}"), d));
    }

    // t-like
    let tmodel = TLikeModel::new(vec![5.0, 8.0], unit_q(0.4)).unwrap();
    let tsample = tmodel.sample(n, &mut RngState::new(62));
    for (k, &nu) in [5.0, 8.0].iter().enumerate() {
        let mut col: Vec<f64> = tsample.column(k).iter().cloned().collect();
        let d = common::ks_statistic(&mut col, |x| t_cdf(x, nu).unwrap());
        checks.push((format!("t-like marginal {k}"), d));
    }

    // meta-stable (one heavy marginal, one Gaussian marginal)
    let ms = MetaStableModel::new(1.7, vec![1.6, 2.0], vec![1.0, 2.0], unit_q(0.4)).unwrap();
    let mssample = ms.sample(n, &mut RngState::new(63), &grid).unwrap();
    let mut col: Vec<f64> = mssample.column(0).iter().cloned().collect();
    checks.push((
        "meta-stable marginal 0".into(),
        common::ks_statistic(&mut col, |x| stable_cdf(x, 1.6).unwrap()),
    ));
    let mut col: Vec<f64> = mssample.column(1).iter().cloned().collect();
    checks.push((
        "meta-stable marginal 1".into(),
        // S_2(sigma) is normal with variance 2 sigma^2
        common::ks_statistic(&mut col, |x| normal_cdf(x / (2.0 * std::f64::consts::SQRT_2))),
    ));

    // meta-t
    let mt = MetaTModel::new(CopulaDof::Finite(4.0), vec![5.0, 8.0], vec![1.0, 2.0], unit_q(0.4))
        .unwrap();
    let mtsample = mt.sample(n, &mut RngState::new(64));
    for (k, (&nu, &delta)) in [5.0, 8.0].iter().zip(&[1.0, 2.0]).enumerate() {
        let mut col: Vec<f64> = mtsample.column(k).iter().cloned().collect();
        let d = common::ks_statistic(&mut col, |x| t_cdf(x / delta, nu).unwrap());
        checks.push((format!("meta-t marginal {k}"), d));
    }

    // Gaussian benchmark
    let g = GaussianModel::new(unit_q(0.4)).unwrap();
    let gsample = g.sample(n, &mut RngState::new(65));
    let mut col: Vec<f64> = gsample.column(0).iter().cloned().collect();
    checks.push(("gaussian marginal 0".into(), common::ks_statistic(&mut col, normal_cdf)));

    let mut worst = 0.0f64;
    for (name, d) in &checks {
        assert!(d < &crit, "{name}: KS {d} >= {crit}");
        worst = worst.max(*d);
    }
    pass(
        "criterion 5 (marginal KS, all families)",
        format!("{} marginals, worst KS {worst:.4} < {crit:.4}", checks.len()),
        t0,
        30.0,
    );
}

#[test]
fn criterion_6_pricing_suite() {
    let t0 = Instant::now();
    // in-out parity on a 1000-point random grid
    let mut rng = RngState::new(808);
    let mut worst_parity = 0.0f64;
    for i in 0..1000 {
        let spot = 50.0 + 100.0 * rng.uniform_open();
        let strike = spot * (0.8 + 0.6 * rng.uniform_open());
        let rate = -0.01 + 0.09 * rng.uniform_open();
        let vol = 0.1 + 0.4 * rng.uniform_open();
        let expiry = 0.1 + 1.9 * rng.uniform_open();
        let market = MarketState::new(spot, rate, vol).unwrap();
        let down = i % 2 == 0;
        let barrier = if down {
            (spot * (0.5 + 0.45 * rng.uniform_open())).min(0.99 * strike)
        } else {
            let h = spot * (1.02 + 0.3 * rng.uniform_open());
            if h >= 0.99 * strike {
                continue; // up barrier must stay below the strike
            }
            h
        };
        let pairs = if down {
            [
                (OptionKind::DownAndInCall, OptionKind::DownAndOutCall, OptionKind::Call),
                (OptionKind::DownAndInPut, OptionKind::DownAndOutPut, OptionKind::Put),
            ]
        } else {
            [
                (OptionKind::UpAndInCall, OptionKind::UpAndOutCall, OptionKind::Call),
                (OptionKind::UpAndInPut, OptionKind::UpAndOutPut, OptionKind::Put),
            ]
        };
        for (kin, kout, vanilla) in pairs {
            let si = OptionSpec::barrier(kin, strike, barrier, expiry).unwrap();
            let so = OptionSpec::barrier(kout, strike, barrier, expiry).unwrap();
            let v = OptionSpec::vanilla(vanilla, strike, expiry).unwrap();
            let pi = barrier_price(&si, &market).unwrap().0.price;
            let po = barrier_price(&so, &market).unwrap().0.price;
            let pv = bs_vanilla(&v, &market).unwrap().price;
            worst_parity = worst_parity.max((pi + po - pv).abs());
        }
    }
    assert!(worst_parity < 1e-10, "in-out parity residual {worst_parity}");

    // analytic Greeks against central finite differences
    let market = MarketState::new(100.0, 0.03, 0.25).unwrap();
    let mut worst_greek = 0.0f64;
    for kind in [
        OptionKind::DownAndInCall,
        OptionKind::DownAndOutCall,
        OptionKind::DownAndInPut,
        OptionKind::UpAndInPut,
        OptionKind::UpAndOutCall,
    ] {
        let h = if kind.is_down_barrier() { 91.0 } else { 112.0 };
        let spec = OptionSpec::barrier(kind, 120.0, h, 0.6).unwrap();
        let q = barrier_price(&spec, &market).unwrap().0;
        let ds = 100.0 * 1e-5;
        let up = barrier_price(&spec, &market.with_spot(100.0 + ds)).unwrap().0.price;
        let dn = barrier_price(&spec, &market.with_spot(100.0 - ds)).unwrap().0.price;
        let fd_delta = (up - dn) / (2.0 * ds);
        let fd_gamma = (up - 2.0 * q.price + dn) / (ds * ds);
        let rel_d = (q.delta - fd_delta).abs() / (1.0 + q.delta.abs());
        let rel_g = (q.gamma - fd_gamma).abs() / (1.0 + q.gamma.abs());
        assert!(rel_d < 1e-4, "{kind:?} delta: {} vs {fd_delta}", q.delta);
        assert!(rel_g < 1e-4, "{kind:?} gamma: {} vs {fd_gamma}", q.gamma);
        worst_greek = worst_greek.max(rel_d).max(rel_g);
    }

    // down-and-in call against the Brownian-bridge Monte Carlo oracle
    let spec = OptionSpec::barrier(OptionKind::DownAndInCall, 100.0, 95.0, 0.5).unwrap();
    let market = MarketState::new(100.0, 0.03, 0.25, ).unwrap();
    let analytic = barrier_price(&spec, &market).unwrap().0.price;
    let (mc, se) = common::down_and_in_call_mc(100.0, 100.0, 95.0, 0.03, 0.25, 0.5, 1_000_000, 99);
    assert!(
        (analytic - mc).abs() < 3.0 * se,
        "C_di {analytic} vs MC {mc} (se {se})"
    );

    // digital complement
    let mut worst_digital = 0.0f64;
    for &(s, r, v, t) in &[(100.0, 0.03, 0.2, 0.5), (80.0, 0.0, 0.4, 1.5), (120.0, 0.07, 0.15, 0.25)] {
        let m = MarketState::new(s, r, v).unwrap();
        let c = cash_or_nothing_price(
            &OptionSpec::binary(OptionKind::CashOrNothingCall, 100.0, 1.0, t).unwrap(),
            &m,
        )
        .unwrap()
        .price;
        let p = cash_or_nothing_price(
            &OptionSpec::binary(OptionKind::CashOrNothingPut, 100.0, 1.0, t).unwrap(),
            &m,
        )
        .unwrap()
        .price;
        worst_digital = worst_digital.max((c + p - (-r * t as f64).exp()).abs());
    }
    assert!(worst_digital < 1e-12, "digital complement residual {worst_digital}");
    pass(
        "criterion 6 (pricing suite)",
        format!(
            "parity {worst_parity:.2e}, Greeks {worst_greek:.2e}, C_di {analytic:.4} vs MC {mc:.4}, digital {worst_digital:.2e}"
        ),
        t0,
        120.0,
    );
}

#[test]
fn criterion_7_delta_gamma_order() {
    let t0 = Instant::now();
    let template = StrategyTemplate::preset(StrategyPreset::Nll, 2, 100.0);
    let portfolio = template.instantiate(&[100.0, 100.0], &[0.25, 0.3], 0.03).unwrap();
    let coeffs = portfolio.delta_gamma_coefficients(TRADING_DAY).unwrap();
    // a same-sign shock direction keeps the cubic terms of the two assets
    // from cancelling each other
    let gap = |scale: f64| -> f64 {
        let x = [0.05 * scale, 0.04 * scale];
        (coeffs.loss(&x).unwrap() - portfolio.loss_full_revaluation(&x, TRADING_DAY).unwrap())
            .abs()
    };
    let ratio = gap(1.0) / gap(0.5);
    assert!(
        (6.0..=10.0).contains(&ratio),
        "halving the shock changed the error by {ratio}, expected [6, 10]"
    );
    pass(
        "criterion 7 (delta-gamma order)",
        format!("error ratio {ratio:.2}"),
        t0,
        10.0,
    );
}

fn calibration_run(family: ModelFamily, seed: u64) -> (usize, usize, usize) {
    // 1250 synthetic days from the family's own law, backtested with the
    // same family: violations must sit inside the central 99% binomial band
    let daily = 0.015f64;
    let q = DispersionMatrix::new(DMatrix::from_row_slice(
        2,
        2,
        &[daily * daily, 0.5 * daily * daily, 0.5 * daily * daily, daily * daily],
    ))
    .unwrap();
    let returns = match family {
        ModelFamily::Gaussian => {
            let model = GaussianModel::new(q).unwrap();
            model.sample(1250, &mut RngState::new(seed))
        }
        ModelFamily::TLike => {
            let model = TLikeModel::new(vec![5.0, 8.0], q).unwrap();
            model.sample(1250, &mut RngState::new(seed))
        }
        _ => unreachable!("calibration families"),
    };
    let template = StrategyTemplate::preset(StrategyPreset::Nll, 2, 100.0);
    let cfg = VarConfig {
        betas: vec![0.95, 0.99],
        paths: 20_000,
        window: 250,
        revaluation: Revaluation::Full,
        seed: seed ^ 0xabcd,
        refit_every: 5,
        ..VarConfig::default()
    };
    let report = rolling_backtest(&returns, &template, family, &cfg).unwrap();
    (
        report.per_beta[0].violations,
        report.per_beta[1].violations,
        report.evaluated,
    )
}

#[test]
fn criterion_8_backtest_calibration() {
    let t0 = Instant::now();
    let mut summaries = Vec::new();
    for (family, seed) in [(ModelFamily::Gaussian, 777u64), (ModelFamily::TLike, 778u64)] {
        let (x95, x99, n) = calibration_run(family, seed);
        let (lo95, hi95) = common::binomial_central_band(n, 0.05, 0.99);
        let (lo99, hi99) = common::binomial_central_band(n, 0.01, 0.99);
        assert!(
            (lo95..=hi95).contains(&x95),
            "{family}: x95 = {x95} outside [{lo95}, {hi95}] of n = {n}"
        );
        assert!(
            (lo99..=hi99).contains(&x99),
            "{family}: x99 = {x99} outside [{lo99}, {hi99}] of n = {n}"
        );
        summaries.push(format!(
            "{family}: x95 = {x95} in [{lo95},{hi95}], x99 = {x99} in [{lo99},{hi99}]"
        ));
    }
    pass(
        "criterion 8 (backtest calibration)",
        summaries.join("; "),
        t0,
        1800.0,
    );
}

#[test]
fn criterion_9_copula_dof_recovery() {
    let t0 = Instant::now();
    // meta-t data with nu0 = 5: the fitted copula dof lands in [3.5, 7]
    let q = unit_q(0.5);
    let model = MetaTModel::new(
        CopulaDof::Finite(5.0),
        vec![5.0, 5.0],
        vec![1.0, 1.0],
        q.clone(),
    )
    .unwrap();
    let n = 10_000;
    let sample = model.sample(n, &mut RngState::new(4_242));
    let mut u = DMatrix::zeros(n, 2);
    for i in 0..n {
        for j in 0..2 {
            u[(i, j)] = t_cdf(sample[(i, j)], 5.0).unwrap().clamp(1e-12, 1.0 - 1e-12);
        }
    }
    let (est, _) = fit_meta_t_dof(&u, &q).unwrap();
    let nu_hat = est.interior().expect("interior optimum for genuine t-copula data");
    assert!((3.5..=7.0).contains(&nu_hat), "nu0 estimate {nu_hat}");

    // Gaussian-copula data drives both meta fits to the degenerate endpoint
    let gauss = GaussianModel::new(q.clone()).unwrap();
    let gsample = gauss.sample(n, &mut RngState::new(5_000));
    let mut gu = DMatrix::zeros(n, 2);
    for i in 0..n {
        for j in 0..2 {
            gu[(i, j)] = normal_cdf(gsample[(i, j)]).clamp(1e-12, 1.0 - 1e-12);
        }
    }
    let (t_est, _) = fit_meta_t_dof(&gu, &q).unwrap();
    let t_degenerate = match t_est {
        heavytail::estimation::CopulaDofEstimate::DegenerateGaussian => true,
        heavytail::estimation::CopulaDofEstimate::Interior(v) => v >= 100.0,
    };
    assert!(t_degenerate, "meta-t fit on Gaussian copula data: {t_est:?}");

    let grid = StableGrid::build(&GridSpec::default()).unwrap();
    let (s_est, _) = fit_meta_stable_index(&gu, &q, &grid).unwrap();
    let s_degenerate = match s_est {
        heavytail::estimation::CopulaDofEstimate::DegenerateGaussian => true,
        heavytail::estimation::CopulaDofEstimate::Interior(a) => a >= 1.95,
    };
    assert!(s_degenerate, "meta-stable fit on Gaussian copula data: {s_est:?}");
    pass(
        "criterion 9 (copula dof recovery)",
        format!("nu0 = {nu_hat:.2} in [3.5, 7]; Gaussian data -> degenerate endpoints"),
        t0,
        300.0,
    );
}
