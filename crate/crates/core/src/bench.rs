//! Repeated-trial benchmark of the EVT estimator against the empirical one.
//!
//! For every distribution and sample size `m`, each trial draws `m` samples,
//! evaluates both estimators and records their errors against the ground
//! truth `rho_alpha(Y)`. Trial seeds are a hash of
//! `(master_seed, distribution id, m, trial index)`, and results are collected
//! in index order, so output is identical for any thread count.
//!
//! Summaries report the mean error and a 50% band taken as the 25th and 75th
//! percentiles of the per-trial errors (linear interpolation between order
//! statistics). EVT statistics are computed over trials whose assumptions held;
//! `evt_valid_fraction` records how many did.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionSpec;
use crate::estimators::{estimate_sorted, rho_alpha_monte_carlo, rho_hat_typical, AssumptionFlags};
use crate::fit::sort_and_summarize;
use crate::rng::{mix_seed, RandomStream};
use crate::special::ln_gamma;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroundTruthMode {
    /// Exact value from [`DistributionSpec::true_rho_alpha`].
    Analytic,
    /// Plug-in Monte Carlo with the given number of samples.
    MonteCarlo { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub distributions: Vec<DistributionSpec>,
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub alpha: f64,
    pub master_seed: u64,
    pub ground_truth: GroundTruthMode,
}

/// Trials per cell for a full-scale run.
pub const FULL_TRIALS: usize = 10_000;
/// Default trials per cell, enough for stable means and bands.
pub const DESK_TRIALS: usize = 2_000;

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            distributions: DistributionSpec::ALL.to_vec(),
            m_values: (20..=99).collect(),
            trials: DESK_TRIALS,
            alpha: 0.01,
            master_seed: 20_220_619,
            ground_truth: GroundTruthMode::Analytic,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if let Some(&m) = self.m_values.iter().find(|&&m| m < 10) {
            return Err(Error::InvalidArgument(format!("every m must be at least 10, got {m}")));
        }
        if self.distributions.is_empty() || self.m_values.is_empty() {
            return Err(Error::InvalidArgument("empty experiment grid".into()));
        }
        if let GroundTruthMode::MonteCarlo { samples } = self.ground_truth {
            if samples < crate::estimators::MC_MIN_SAMPLES {
                return Err(Error::InvalidArgument(format!(
                    "Monte Carlo ground truth needs at least {} samples",
                    crate::estimators::MC_MIN_SAMPLES
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub dist: DistributionSpec,
    pub m: usize,
    pub trial_index: usize,
    /// `rho_typical - rho_alpha`.
    pub err_typical: f64,
    /// `rho_evt - rho_alpha`, absent when the fit failed or an assumption did not hold.
    pub err_evt: Option<f64>,
    /// `None` when the fit itself failed.
    pub assumptions: Option<AssumptionFlags>,
}

impl TrialRecord {
    pub fn fit_failed(&self) -> bool {
        self.assumptions.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub dist: DistributionSpec,
    pub m: usize,
    pub trials_completed: usize,
    pub evt_valid_fraction: f64,
    pub mean_err_typical: f64,
    pub q25_typical: f64,
    pub q75_typical: f64,
    /// `None` when no trial produced an EVT estimate.
    pub mean_err_evt: Option<f64>,
    pub q25_evt: Option<f64>,
    pub q75_evt: Option<f64>,
}

pub fn trial_seed(master_seed: u64, dist: DistributionSpec, m: usize, trial_index: usize) -> u64 {
    mix_seed(&[master_seed, dist.id(), m as u64, trial_index as u64])
}

/// Ground truth for one distribution.
pub fn ground_truth(
    dist: DistributionSpec,
    alpha: f64,
    mode: GroundTruthMode,
    master_seed: u64,
) -> Result<f64> {
    match mode {
        GroundTruthMode::Analytic => dist.true_rho_alpha(alpha),
        GroundTruthMode::MonteCarlo { samples } => {
            let stream = RandomStream::new(mix_seed(&[master_seed, dist.id(), u64::MAX]));
            Ok(rho_alpha_monte_carlo(dist, alpha, samples, &stream)?.estimate)
        }
    }
}

/// One trial: draw `m` samples, run both estimators, record errors against `truth`.
pub fn run_trial(
    dist: DistributionSpec,
    m: usize,
    alpha: f64,
    trial_seed: u64,
    truth: f64,
) -> Result<TrialRecord> {
    let mut stream = RandomStream::new(trial_seed);
    let data = dist.sample_iid(m, &mut stream)?;
    let sample = sort_and_summarize(&data)?;
    let err_typical = rho_hat_typical(&sample, alpha)? - truth;
    let (err_evt, assumptions) = match estimate_sorted(&sample, alpha) {
        Ok(report) => (report.rho_evt.map(|r| r - truth), Some(report.assumptions)),
        Err(Error::Fit(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(TrialRecord {
        dist,
        m,
        trial_index: 0,
        err_typical,
        err_evt,
        assumptions,
    })
}

/// All trials for one `(dist, m)` cell, in trial-index order.
pub fn run_series(
    config: &ExperimentConfig,
    dist: DistributionSpec,
    m: usize,
    truth: f64,
) -> Result<Vec<TrialRecord>> {
    (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(config.master_seed, dist, m, i);
            let mut rec = run_trial(dist, m, config.alpha, seed, truth)?;
            rec.trial_index = i;
            Ok(rec)
        })
        .collect()
}

/// Linear-interpolation empirical quantile of ascending `sorted` at `p` in [0, 1].
pub fn empirical_quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn mean_and_band(errors: &mut [f64]) -> (f64, f64, f64) {
    errors.sort_by(f64::total_cmp);
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    (mean, empirical_quantile(errors, 0.25), empirical_quantile(errors, 0.75))
}

/// Mean error and interquartile band for records that share `(dist, m)`.
pub fn summarize_errors(records: &[TrialRecord]) -> Result<SeriesSummary> {
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidArgument("no trial records to summarize".into()))?;
    if records.iter().any(|r| r.dist != first.dist || r.m != first.m) {
        return Err(Error::InvalidArgument("records span more than one (dist, m) cell".into()));
    }
    let mut typical: Vec<f64> = records.iter().map(|r| r.err_typical).collect();
    let mut evt: Vec<f64> = records.iter().filter_map(|r| r.err_evt).collect();
    let (mean_t, q25_t, q75_t) = mean_and_band(&mut typical);
    let evt_stats = (!evt.is_empty()).then(|| mean_and_band(&mut evt));
    Ok(SeriesSummary {
        dist: first.dist,
        m: first.m,
        trials_completed: records.len(),
        evt_valid_fraction: evt.len() as f64 / records.len() as f64,
        mean_err_typical: mean_t,
        q25_typical: q25_t,
        q75_typical: q75_t,
        mean_err_evt: evt_stats.map(|s| s.0),
        q25_evt: evt_stats.map(|s| s.1),
        q75_evt: evt_stats.map(|s| s.2),
    })
}

/// Full grid, one summary per `(dist, m)`, sorted by distribution then `m`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<SeriesSummary>> {
    config.validate()?;
    let mut dists = config.distributions.clone();
    dists.sort();
    dists.dedup();
    let mut ms = config.m_values.clone();
    ms.sort_unstable();
    ms.dedup();

    let mut out = Vec::with_capacity(dists.len() * ms.len());
    for dist in dists {
        let truth = ground_truth(dist, config.alpha, config.ground_truth, config.master_seed)?;
        let cells: Result<Vec<SeriesSummary>> = ms
            .par_iter()
            .map(|&m| summarize_errors(&run_series(config, dist, m, truth)?))
            .collect();
        out.extend(cells?);
    }
    Ok(out)
}

/// One-sided sign test: probability of at least `wins` successes out of `n`
/// fair coin flips.
pub fn sign_test_p_value(wins: usize, n: usize) -> f64 {
    if wins == 0 {
        return 1.0;
    }
    if wins > n {
        return 0.0;
    }
    let nf = n as f64;
    let ln_half_n = nf * 0.5f64.ln();
    (wins..=n)
        .map(|j| {
            let jf = j as f64;
            (ln_gamma(nf + 1.0) - ln_gamma(jf + 1.0) - ln_gamma(nf - jf + 1.0) + ln_half_n).exp()
        })
        .sum::<f64>()
        .min(1.0)
}
