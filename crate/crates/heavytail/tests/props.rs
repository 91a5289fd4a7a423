//! Property tests of the structural invariants.

use heavytail::backtest::{empirical_quantile, kupiec_pof};
use heavytail::dist::{stable_cdf, stable_quantile};
use heavytail::estimation::{kendall_tau, signed_moment, signed_moment_inverse};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn empirical_quantile_monotone_and_shift_equivariant(
        mut samples in prop::collection::vec(-1e3f64..1e3, 1..200),
        beta1 in 0.01f64..0.98,
        delta in 0.005f64..0.02,
        shift in -50.0f64..50.0,
    ) {
        let beta2 = beta1 + delta;
        let q1 = empirical_quantile(&samples, beta1).unwrap();
        let q2 = empirical_quantile(&samples, beta2).unwrap();
        prop_assert!(q2 >= q1);
        for s in samples.iter_mut() {
            *s += shift;
        }
        let q_shifted = empirical_quantile(&samples, beta1).unwrap();
        prop_assert!((q_shifted - (q1 + shift)).abs() < 1e-9);
    }

    #[test]
    fn kupiec_statistic_nonnegative_and_zero_only_at_nominal(
        n in 100usize..5000,
        x in 0usize..5000,
        beta in 0.5f64..0.999,
    ) {
        prop_assume!(x <= n);
        let t = kupiec_pof(x, n, beta).unwrap();
        prop_assert!(t.statistic >= 0.0);
        let nominal = (1.0 - beta) * n as f64;
        if (x as f64 - nominal).abs() > 1e-9 {
            prop_assert!(t.statistic > 0.0);
        } else {
            prop_assert!(t.statistic.abs() < 1e-9);
        }
    }

    #[test]
    fn kendall_tau_invariant_under_strictly_increasing_maps(
        pairs in prop::collection::vec((-1e2f64..1e2, -1e2f64..1e2), 10..120),
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let base = kendall_tau(&x, &y).unwrap();
        let xt: Vec<f64> = x.iter().map(|v| v / 30.0 + (v / 40.0).tanh()).collect();
        let yt: Vec<f64> = y.iter().map(|v| v.exp_m1().max(-0.99) + v * 2.0).collect();
        let t = kendall_tau(&xt, &yt).unwrap();
        prop_assert!((base - t).abs() < 1e-12);
        prop_assert!((-1.0..=1.0).contains(&base));
    }

    #[test]
    fn stable_cdf_monotone_and_symmetric(
        alpha in 1.05f64..2.0,
        x in -30.0f64..30.0,
        dx in 0.01f64..1.0,
    ) {
        let f1 = stable_cdf(x, alpha).unwrap();
        let f2 = stable_cdf(x + dx, alpha).unwrap();
        prop_assert!(f2 + 1e-12 >= f1);
        let fm = stable_cdf(-x, alpha).unwrap();
        prop_assert!((f1 + fm - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stable_quantile_inverts_the_cdf(
        alpha in 1.1f64..2.0,
        u in 0.02f64..0.98,
    ) {
        let x = stable_quantile(u, alpha).unwrap();
        let back = stable_cdf(x, alpha).unwrap();
        prop_assert!((back - u).abs() < 1e-8);
    }

    #[test]
    fn signed_moment_odd_and_invertible(
        q in -0.95f64..0.95,
        p in 0.15f64..0.5,
    ) {
        let f = signed_moment(q, p).unwrap();
        let g = signed_moment(-q, p).unwrap();
        prop_assert!((f + g).abs() < 1e-12);
        let back = signed_moment_inverse(f, p).unwrap();
        prop_assert!((back - q).abs() < 1e-8);
    }
}
