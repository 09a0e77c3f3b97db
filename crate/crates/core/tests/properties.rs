use proptest::prelude::*;

use evt_risk::distributions::DistributionSpec;
use evt_risk::estimators::rho_alpha_monte_carlo;
use evt_risk::fit::{fit_tail, pwme_fit, sort_and_summarize, DEFAULT_THRESHOLD_QUANTILE};
use evt_risk::rng::RandomStream;
use evt_risk::tail::{
    cvar_theta, f_theta_cdf, mean_theta, quantile_theta, rho_hat_evt, var_theta, ParamTheta,
};

fn theta_strategy() -> impl Strategy<Value = ParamTheta> {
    (20usize..500, 0.0f64..1.0, -2.0f64..0.95, -5.0f64..5.0, -2.0f64..2.0).prop_map(
        |(m, kf, gamma, s_rel, lg)| {
            let k = 2 + ((m - 3) as f64 * kf) as usize;
            let g_s = 10f64.powf(lg);
            ParamTheta::new(k, m, gamma, s_rel * g_s, g_s).unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn pwm_shape_stays_below_one(
        exc in prop::collection::vec(1e-6f64..1e6, 2..200),
        below in 1usize..40,
    ) {
        let s = 0.0;
        let mut data: Vec<f64> = (0..below).map(|j| -(j as f64)).collect();
        data.extend(&exc);
        let sample = sort_and_summarize(&data).unwrap();
        let fit = pwme_fit(&sample, s, exc.len()).unwrap();
        prop_assert!(fit.theta.gamma < 1.0);
        prop_assert!(fit.theta.g_s > 0.0);
    }

    #[test]
    fn pwm_fit_is_affine_equivariant(seed in any::<u64>(), a in -10.0f64..10.0, b in 0.1f64..10.0) {
        let mut stream = RandomStream::new(seed);
        let xs = DistributionSpec::Exponential1.sample_iid(60, &mut stream).unwrap();
        let ys: Vec<f64> = xs.iter().map(|x| a + b * x).collect();
        let tx = fit_tail(&sort_and_summarize(&xs).unwrap(), DEFAULT_THRESHOLD_QUANTILE).unwrap().theta;
        let ty = fit_tail(&sort_and_summarize(&ys).unwrap(), DEFAULT_THRESHOLD_QUANTILE).unwrap().theta;
        prop_assert_eq!(tx.k, ty.k);
        prop_assert!((tx.gamma - ty.gamma).abs() < 1e-12);
        prop_assert!((ty.g_s / (b * tx.g_s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_function_is_monotone(th in theta_strategy(), mut zs in prop::collection::vec(-10.0f64..50.0, 2..50)) {
        for z in zs.iter_mut() {
            *z = th.s + *z * th.g_s;
        }
        zs.sort_by(f64::total_cmp);
        let fs: Vec<f64> = zs.iter().map(|&z| f_theta_cdf(&th, z)).collect();
        prop_assert!(fs.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(fs.iter().all(|f| (0.0..=1.0).contains(f)));
    }

    #[test]
    fn value_at_risk_hits_its_level(th in theta_strategy(), frac in 0.001f64..0.999) {
        let alpha = frac * th.tail_fraction();
        let v = var_theta(&th, alpha).unwrap();
        prop_assert!((f_theta_cdf(&th, v) - (1.0 - alpha)).abs() < 1e-12);
        prop_assert!(th.support().contains_interior(v));
        let v_smaller = var_theta(&th, alpha * 0.5).unwrap();
        prop_assert!(v_smaller >= v);
    }

    #[test]
    fn cvar_dominates_var_and_rho_is_nonnegative(th in theta_strategy(), frac in 0.001f64..0.999) {
        let alpha = frac * th.tail_fraction();
        let v = var_theta(&th, alpha).unwrap();
        let c = cvar_theta(&th, alpha).unwrap();
        prop_assert!(c >= v);
        prop_assert!(rho_hat_evt(&th, alpha, th.s).unwrap() >= 0.0);
    }
}

#[test]
fn tail_model_mean_matches_sampling() {
    // sampling through the quantile function is an independent route to E[Y]
    for (i, &gamma) in [-1.0, -0.3, 0.0, 0.2, 0.4].iter().enumerate() {
        let th = ParamTheta::new(10, 100, gamma, 1.0, 0.5).unwrap();
        let mut stream = RandomStream::new(900 + i as u64);
        let n = 400_000;
        let draws: Vec<f64> = (0..n)
            .map(|_| quantile_theta(&th, stream.open_unit()).unwrap())
            .collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let sd = (draws.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        let exact = mean_theta(&th).unwrap();
        assert!(
            (mean - exact).abs() < 5.0 * sd / (n as f64).sqrt(),
            "gamma={gamma}: sampled {mean} vs {exact}"
        );
    }
}

#[test]
fn samplers_match_their_distribution_functions() {
    let n = 100_000;
    for dist in DistributionSpec::ALL {
        let mut stream = RandomStream::new(17 + dist.id());
        let mut xs = dist.sample_iid(n, &mut stream).unwrap();
        xs.sort_by(f64::total_cmp);
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = dist.cdf(x);
                (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "{dist}: KS distance {ks}");
    }
}

#[test]
fn monte_carlo_error_shrinks_with_sample_size() {
    let dist = DistributionSpec::Exponential1;
    let small = rho_alpha_monte_carlo(dist, 0.05, 200_000, &RandomStream::new(1)).unwrap();
    let large = rho_alpha_monte_carlo(dist, 0.05, 400_000, &RandomStream::new(1)).unwrap();
    let ratio = large.std_error / small.std_error;
    assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn large_sample_fit_recovers_heavy_tail_index() {
    let dist = DistributionSpec::Pareto2;
    let mut stream = RandomStream::new(31);
    let xs = dist.sample_iid(100_000, &mut stream).unwrap();
    let theta = fit_tail(&sort_and_summarize(&xs).unwrap(), DEFAULT_THRESHOLD_QUANTILE)
        .unwrap()
        .theta;
    assert!((theta.gamma - 0.5).abs() < 0.05, "gamma {}", theta.gamma);
}
