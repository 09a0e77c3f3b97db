//! Estimation pipeline, the empirical estimator, and the numeric oracles used
//! to check them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::fit::{ceil_tolerant, fit_tail, sort_and_summarize, FitWarning, SortedSample, DEFAULT_THRESHOLD_QUANTILE};
use crate::numeric::{bisect_increasing, integrate};
use crate::rng::RandomStream;
use crate::tail::{self, f_theta_cdf, phi_gamma, tail_density, ParamTheta, GAMMA_ZERO_TOL};
use crate::{Error, Result};

/// Empirical estimator of the extremal upper-semideviation.
///
/// Uses the `k_typ + 1` largest samples, with `k_typ = m - ceil((1 - alpha) m)`
/// so that `y_(m - k_typ)` is the empirical `(1 - alpha)`-quantile:
/// `(1/m) sum_{i = m - k_typ}^{m} max(y_(i) - mu_m, 0)`.
pub fn rho_hat_typical(sample: &SortedSample, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let m = sample.m();
    if m < 2 {
        return Err(Error::InvalidArgument("the empirical estimator needs m >= 2".into()));
    }
    let start = (ceil_tolerant((1.0 - alpha) * m as f64) as usize).clamp(1, m);
    let mu = sample.mu_m();
    let total: f64 = sample.values()[start - 1..]
        .iter()
        .map(|&y| (y - mu).max(0.0))
        .sum();
    Ok(total / m as f64)
}

/// Which hypotheses of the closed-form estimator held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionFlags {
    pub alpha_lt_k_over_m: bool,
    pub gamma_lt_1: bool,
    pub var_ge_mean: bool,
}

impl AssumptionFlags {
    pub fn all_hold(&self) -> bool {
        self.alpha_lt_k_over_m && self.gamma_lt_1 && self.var_ge_mean
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportWarning {
    TiedThreshold,
    AlphaNotBelowTailFraction,
    VarBelowMean,
}

/// Output of [`estimate_evt`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub alpha: f64,
    #[serde(flatten)]
    pub theta: ParamTheta,
    pub mu_m: f64,
    /// `v_alpha(Y_theta)`; absent when `alpha >= k/m`.
    pub var_theta: Option<f64>,
    pub cvar_theta: Option<f64>,
    /// Present only when every assumption flag holds.
    pub rho_evt: Option<f64>,
    pub rho_typical: f64,
    pub assumptions: AssumptionFlags,
    pub warnings: Vec<ReportWarning>,
}

/// Sort, pick the threshold, fit, check assumptions, evaluate both estimators.
///
/// Fit failures (fewer than two exceedances) are errors; failed assumptions
/// are reported through [`EstimateReport::assumptions`] and leave `rho_evt` empty.
pub fn estimate_evt(data: &[f64], alpha: f64) -> Result<EstimateReport> {
    let sample = sort_and_summarize(data)?;
    estimate_sorted(&sample, alpha)
}

pub fn estimate_sorted(sample: &SortedSample, alpha: f64) -> Result<EstimateReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let fit = fit_tail(sample, DEFAULT_THRESHOLD_QUANTILE)?;
    let theta = fit.theta;
    let mu_m = sample.mu_m();
    let rho_typical = rho_hat_typical(sample, alpha)?;

    let mut warnings: Vec<ReportWarning> = fit
        .warnings
        .iter()
        .map(|w| match w {
            FitWarning::TiedThreshold => ReportWarning::TiedThreshold,
        })
        .collect();

    let gamma_lt_1 = theta.gamma < 1.0;
    let var = tail::var_theta(&theta, alpha).ok();
    let alpha_lt_k_over_m = var.is_some();
    let cvar = if gamma_lt_1 { tail::cvar_theta(&theta, alpha).ok() } else { None };
    let var_ge_mean = var.is_some_and(|v| v >= mu_m);

    if !alpha_lt_k_over_m {
        warnings.push(ReportWarning::AlphaNotBelowTailFraction);
    } else if !var_ge_mean {
        warnings.push(ReportWarning::VarBelowMean);
    }
    let assumptions = AssumptionFlags {
        alpha_lt_k_over_m,
        gamma_lt_1,
        var_ge_mean,
    };
    let rho_evt = if assumptions.all_hold() {
        Some(tail::rho_hat_evt(&theta, alpha, mu_m)?)
    } else {
        None
    };

    Ok(EstimateReport {
        alpha,
        theta,
        mu_m,
        var_theta: var,
        cvar_theta: cvar,
        rho_evt,
        rho_typical,
        assumptions,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

const MC_CHUNK: usize = 1 << 16;
pub const MC_MIN_SAMPLES: usize = 10_000;

/// Plug-in Monte Carlo ground truth for `rho_alpha`.
///
/// Draws `n` samples in fixed-size chunks, chunk `i` from `stream.fork(i)`, so
/// the result does not depend on the number of worker threads. With `v` the
/// empirical `(1 - alpha)`-quantile and `mu` the sample mean, the estimate is
/// the mean of `max(y - mu, 0) [y >= v]` and the standard error comes from the
/// sample variance of that summand.
pub fn rho_alpha_monte_carlo(
    dist: DistributionSpec,
    alpha: f64,
    n: usize,
    stream: &RandomStream,
) -> Result<MonteCarloEstimate> {
    if n < MC_MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least {MC_MIN_SAMPLES} samples, got {n}"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let mut ys = vec![0.0; n];
    ys.par_chunks_mut(MC_CHUNK).enumerate().for_each(|(i, chunk)| {
        let mut s = stream.fork(i as u64);
        dist.sample_into(chunk, &mut s);
    });

    let chunk_sums: Vec<f64> = ys.par_chunks(MC_CHUNK).map(|c| c.iter().sum()).collect();
    let mu = chunk_sums.iter().sum::<f64>() / n as f64;

    let rank = (ceil_tolerant((1.0 - alpha) * n as f64) as usize).clamp(1, n);
    let v = *ys.select_nth_unstable_by(rank - 1, f64::total_cmp).1;

    let summand = |y: f64| if y >= v { (y - mu).max(0.0) } else { 0.0 };
    let sums: Vec<f64> = ys
        .par_chunks(MC_CHUNK)
        .map(|c| c.iter().map(|&y| summand(y)).sum())
        .collect();
    let estimate = sums.iter().sum::<f64>() / n as f64;
    let sq: Vec<f64> = ys
        .par_chunks(MC_CHUNK)
        .map(|c| c.iter().map(|&y| (summand(y) - estimate).powi(2)).sum())
        .collect();
    let variance = sq.iter().sum::<f64>() / (n as f64 - 1.0);
    Ok(MonteCarloEstimate {
        estimate,
        std_error: (variance / n as f64).sqrt(),
        samples: n,
    })
}

/// Direct numeric evaluation of `int_{[v, inf)} max(z - mu_m, 0) dP_theta(z)`
/// as `psi_1 + psi_2`, where
///
/// ```text
/// psi_1 = int_v^{z*} (z - v) f_theta(z) dz          (quadrature of the tail density)
/// psi_2 = (v - mu_m) P_theta([v, inf))             (from F_theta)
/// ```
///
/// and `v` is found by bisection on `F_theta`. Shares no formula with
/// [`tail::rho_hat_evt`]; it exists to check that closed form.
pub fn rho_hat_integral_oracle(theta: &ParamTheta, alpha: f64, mu_m: f64) -> Result<f64> {
    // Same preconditions as the closed form.
    tail::var_theta(theta, alpha)?;
    if theta.gamma >= 1.0 {
        return Err(Error::Precondition("gamma must be below 1".into()));
    }
    let v = var_by_bisection(theta, alpha)?;
    if v < mu_m {
        return Err(Error::AssumptionViolated(format!(
            "value-at-risk {v} is below the sample mean {mu_m}"
        )));
    }
    let psi1 = excess_integral(theta, v)?;
    let psi2 = (v - mu_m) * (1.0 - f_theta_cdf(theta, v));
    Ok(psi1 + psi2)
}

fn var_by_bisection(theta: &ParamTheta, alpha: f64) -> Result<f64> {
    let target = 1.0 - alpha;
    let cdf = |z| f_theta_cdf(theta, z);
    let upper = theta.support().upper;
    let mut hi = if upper.is_finite() {
        upper
    } else {
        theta.s + theta.g_s
    };
    while cdf(hi) < target {
        hi = theta.s + 2.0 * (hi - theta.s);
        if !hi.is_finite() {
            return Err(Error::Domain("could not bracket the value-at-risk".into()));
        }
    }
    bisect_increasing(cdf, target, theta.s, hi, 0.0)
}

/// `int_v^{z*} (z - v) f_theta(z) dz` by adaptive quadrature, after a change
/// of variables that leaves a bounded integrand at the far end of the support.
fn excess_integral(theta: &ParamTheta, v: f64) -> Result<f64> {
    let gamma = theta.gamma;
    let (abs_tol, rel_tol) = (1e-300, 1e-12);
    if gamma < 0.0 && gamma.abs() >= GAMMA_ZERO_TOL {
        // z = upper - L u^p, u in (0, 1]; near the endpoint the density behaves
        // like (upper - z)^(-1/gamma - 1), cancelled by p >= -gamma.
        // Work with the distance d = upper - z directly: 1 + gamma x = |gamma| d / g_s,
        // which avoids cancelling against the endpoint when v is close to it.
        let len = theta.support().upper - v;
        let p = (-gamma).max(0.25);
        let scale = theta.tail_fraction() / theta.g_s;
        let expo = -1.0 / gamma - 1.0;
        let f = |u: f64| {
            let up = u.powf(p);
            let d = len * up;
            let density = scale * (-gamma * d / theta.g_s).powf(expo);
            let jac = len * p * u.powf(p - 1.0);
            len * (1.0 - up) * density * jac
        };
        return Ok(integrate(f, 0.0, 1.0, abs_tol, rel_tol)?.value);
    }

    // z = v + g_v (t^-r - 1), t in (0, 1], with g_v the scale of the excess
    // over v. r = gamma / (1 - gamma) makes the integrand tend to a constant
    // as t -> 0 for heavy tails; lighter tails vanish there.
    let g_v = theta.g_s + gamma.max(0.0) * (v - theta.s);
    let r = if gamma > 0.0 { (gamma / (1.0 - gamma)).max(0.25) } else { 0.25 };
    if gamma.abs() < GAMMA_ZERO_TOL {
        let f = |t: f64| {
            let w = t.powf(-r);
            let z = v + g_v * (w - 1.0);
            (z - v) * tail_density(theta, z) * g_v * r * w / t
        };
        return Ok(integrate(f, 0.0, 1.0, abs_tol, rel_tol)?.value);
    }
    // Heavy tail: evaluate in logs, because z overflows long before the
    // integrand does. With x = (z - s)/g_s, 1 + gamma x = A + B t^-r.
    let a = g_v * (1.0 - gamma) / theta.g_s;
    let b = gamma * g_v / theta.g_s;
    let log_scale = (theta.tail_fraction() / theta.g_s).ln();
    let f = |t: f64| {
        let ln_t = t.ln();
        // ln(1 + gamma x) = -r ln t + ln(B + A t^r)
        let ln_base = -r * ln_t + (b + a * (r * ln_t).exp()).ln();
        let ln_density = log_scale - (1.0 / gamma + 1.0) * ln_base;
        // z - v = g_v (t^-r - 1)
        let ln_excess = g_v.ln() + (-r * ln_t).exp_m1().ln();
        let ln_jac = g_v.ln() + r.ln() - (r + 1.0) * ln_t;
        (ln_excess + ln_density + ln_jac).exp()
    };
    Ok(integrate(f, 0.0, 1.0, abs_tol, rel_tol)?.value)
}

/// Pointwise error of the peaks-over-threshold tail approximation:
/// `|(1 - F(z)) - (1 - F(s)) phi_gamma((z - s)/g_s)|` for each grid point.
pub fn tail_approx_error(
    dist: DistributionSpec,
    theta: &ParamTheta,
    z_grid: &[f64],
) -> Result<Vec<f64>> {
    let support = theta.support();
    let tail_at_s = dist.survival(theta.s);
    z_grid
        .iter()
        .map(|&z| {
            if !support.contains(z) {
                return Err(Error::Domain(format!(
                    "z = {z} lies outside [{}, {})",
                    support.lower, support.upper
                )));
            }
            let model = tail_at_s * phi_gamma(theta.gamma, (z - theta.s) / theta.g_s)?;
            Ok((dist.survival(z) - model).abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(xs: &[f64]) -> SortedSample {
        sort_and_summarize(xs).unwrap()
    }

    fn range(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64).collect()
    }

    #[test]
    fn typical_estimator_examples() {
        assert!((rho_hat_typical(&sorted(&range(10)), 0.05).unwrap() - 0.45).abs() < 1e-15);
        assert!((rho_hat_typical(&sorted(&range(100)), 0.01).unwrap() - 0.98).abs() < 1e-14);
        assert_eq!(rho_hat_typical(&sorted(&[3.0; 20]), 0.01).unwrap(), 0.0);
        assert!(rho_hat_typical(&sorted(&[1.0]), 0.01).is_err());
        assert!(rho_hat_typical(&sorted(&range(10)), 1.0).is_err());
    }

    #[test]
    fn typical_estimator_uses_whole_sample_at_large_alpha() {
        // alpha = 0.95, m = 10: ceil(0.5) = 1, every point contributes
        let s = sorted(&range(10));
        let all: f64 = s.values().iter().map(|y| (y - 5.5f64).max(0.0)).sum::<f64>() / 10.0;
        assert!((rho_hat_typical(&s, 0.95).unwrap() - all).abs() < 1e-15);
    }

    #[test]
    fn pipeline_flags() {
        let report = estimate_evt(&range(20), 0.5).unwrap();
        assert!(!report.assumptions.alpha_lt_k_over_m);
        assert!(report.rho_evt.is_none());
        assert!(report.var_theta.is_none());
        assert_eq!(report.warnings, vec![ReportWarning::AlphaNotBelowTailFraction]);

        let err = estimate_evt(&[7.0; 30], 0.01).unwrap_err();
        assert!(matches!(err, Error::Fit(_)));
    }

    #[test]
    fn pipeline_on_linear_data() {
        let report = estimate_evt(&range(20), 0.01).unwrap();
        assert_eq!(report.theta.k, 2);
        assert_eq!(report.theta.s, 18.0);
        // exceedances 2 and 1: P = 1.5, Q = 0.25
        assert!((report.theta.gamma - 0.5).abs() < 1e-15);
        assert!((report.theta.g_s - 0.75).abs() < 1e-15);
        assert!(report.assumptions.all_hold());
        let rho = report.rho_evt.unwrap();
        let expect = 0.01 * (report.cvar_theta.unwrap() - 10.5);
        assert!((rho - expect).abs() < 1e-15);
    }

    #[test]
    fn oracle_matches_closed_form_on_pareto_tail() {
        let s = 10f64.sqrt();
        let th = ParamTheta::new(10, 100, 0.5, s, s / 2.0).unwrap();
        let oracle = rho_hat_integral_oracle(&th, 0.01, 2.0).unwrap();
        assert!((oracle - 0.18).abs() < 1e-10, "{oracle}");
    }

    #[test]
    fn oracle_matches_closed_form_across_shapes() {
        for &gamma in &[-1.9, -1.0, -0.5, -0.1, -1e-12, 0.0, 1e-12, 0.05, 0.3, 0.7, 0.94] {
            let th = ParamTheta::new(7, 60, gamma, 1.5, 0.8).unwrap();
            for &alpha in &[0.001, 0.03, 0.1] {
                let closed = tail::rho_hat_evt(&th, alpha, 1.0).unwrap();
                let oracle = rho_hat_integral_oracle(&th, alpha, 1.0).unwrap_or_else(|e| panic!("gamma={gamma} alpha={alpha}: {e}"));
                assert!(
                    (closed - oracle).abs() <= 1e-9 * closed.abs(),
                    "gamma={gamma} alpha={alpha}: {closed} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn monte_carlo_uniform_half() {
        let mc = rho_alpha_monte_carlo(DistributionSpec::Uniform01, 0.5, 100_000, &RandomStream::new(5)).unwrap();
        assert!((mc.estimate - 0.125).abs() < 3.0 * mc.std_error, "{mc:?}");
        assert!(rho_alpha_monte_carlo(DistributionSpec::Uniform01, 0.5, 9_999, &RandomStream::new(5)).is_err());
    }

    #[test]
    fn monte_carlo_is_thread_independent() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    rho_alpha_monte_carlo(DistributionSpec::TStudent5, 0.01, 300_000, &RandomStream::new(77)).unwrap()
                })
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn tail_error_exact_cases() {
        let th = ParamTheta::new(10, 100, 0.0, 1.3, 1.0).unwrap();
        let errs = tail_approx_error(DistributionSpec::Exponential1, &th, &[1.3, 2.0, 9.0, 30.0]).unwrap();
        assert!(errs.iter().all(|&e| e <= 1e-14));

        let s = 4.0;
        let th = ParamTheta::new(10, 100, 0.5, s, s / 2.0).unwrap();
        let errs = tail_approx_error(DistributionSpec::Pareto2, &th, &[4.0, 5.0, 100.0, 1e6]).unwrap();
        assert!(errs.iter().all(|&e| e <= 1e-14));

        let th = ParamTheta::new(10, 100, 0.0, 4.0, 1.0).unwrap();
        assert_eq!(tail_approx_error(DistributionSpec::Gumbel, &th, &[4.0]).unwrap(), vec![0.0]);
        assert!(matches!(
            tail_approx_error(DistributionSpec::Gumbel, &th, &[3.9]),
            Err(Error::Domain(_))
        ));
    }
}
