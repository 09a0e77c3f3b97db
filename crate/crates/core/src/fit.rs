//! Threshold selection and the probability-weighted moment (PWM) fit of the
//! tail parameters.
//!
//! The threshold is the order statistic `y_(ceil(q m))` (1-based, `q = 0.90`
//! by default), and `k` counts the samples strictly above it. With the `k`
//! exceedances `e_1 >= e_2 >= ... >= e_k` over the threshold,
//!
//! ```text
//! P = (1/k) sum_{i=0}^{k-1} e_{i+1}
//! Q = (1/k) sum_{i=0}^{k-1} (i/k) e_{i+1}
//! gamma = (P - 4Q) / (P - 2Q)        g_s = 2 P Q / (P - 2Q)
//! ```
//!
//! For positive exceedances `Q > 0` and `P - 2Q > 0`, so `gamma < 1` always.

use serde::{Deserialize, Serialize};

use crate::tail::ParamTheta;
use crate::{Error, Result};

pub const DEFAULT_THRESHOLD_QUANTILE: f64 = 0.90;
pub const MIN_SAMPLE_SIZE: usize = 10;
pub const MIN_EXCEEDANCES: usize = 2;

/// Order statistics of a data set together with its mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
    mu_m: f64,
}

impl SortedSample {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn mu_m(&self) -> f64 {
        self.mu_m
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("sample is non-empty")
    }
}

/// Sort a copy of `data` ascending and record its mean.
pub fn sort_and_summarize(data: &[f64]) -> Result<SortedSample> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("data set is empty".into()));
    }
    if let Some(i) = data.iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "value {} at position {i} is not finite",
            data[i]
        )));
    }
    let mut values = data.to_vec();
    values.sort_by(f64::total_cmp);
    let mu_m = neumaier_sum(&values) / values.len() as f64;
    Ok(SortedSample { values, mu_m })
}

fn neumaier_sum(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ceil(x)` that treats values within rounding noise of an integer as that
/// integer, so `0.99 * 100` and `0.9 * 20` land on 99 and 18.
pub(crate) fn ceil_tolerant(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x.ceil()
    }
}

/// Threshold `s = y_(ceil(q m))` and the count `k` of samples strictly above it.
pub fn select_threshold(sample: &SortedSample, q: f64) -> Result<(f64, usize)> {
    let m = sample.m();
    if m < MIN_SAMPLE_SIZE {
        return Err(Error::InvalidArgument(format!(
            "threshold selection needs at least {MIN_SAMPLE_SIZE} samples, got {m}"
        )));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidArgument(format!("q must lie in (0, 1), got {q}")));
    }
    let index = (ceil_tolerant(q * m as f64) as usize).clamp(1, m);
    let s = sample.values[index - 1];
    let k = m - sample.values.partition_point(|&y| y <= s);
    match k {
        0 => Err(Error::Fit(format!(
            "no strict exceedances above the threshold {s}"
        ))),
        1 => Err(Error::Fit(format!(
            "only one strict exceedance above the threshold {s}; at least {MIN_EXCEEDANCES} are required"
        ))),
        _ => Ok((s, k)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitWarning {
    /// Several samples equal the threshold, so `k / m` is below `1 - q`.
    TiedThreshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub theta: ParamTheta,
    pub exceedances_used: usize,
    pub warnings: Vec<FitWarning>,
}

/// PWM fit of `gamma` and `g_s` from the `k` largest samples over threshold `s`.
pub fn pwme_fit(sample: &SortedSample, s: f64, k: usize) -> Result<FitReport> {
    let m = sample.m();
    if k < MIN_EXCEEDANCES || k >= m {
        return Err(Error::Fit(format!(
            "need {MIN_EXCEEDANCES} <= k < m, got k = {k}, m = {m}"
        )));
    }
    let top = &sample.values[m - k..];
    if top[0] <= s {
        return Err(Error::Fit(format!(
            "the {k} largest samples do not all exceed the threshold {s}"
        )));
    }

    let kf = k as f64;
    let (mut p, mut q) = (0.0, 0.0);
    for (i, &y) in top.iter().rev().enumerate() {
        let e = y - s;
        p += e;
        q += (i as f64 / kf) * e;
    }
    p /= kf;
    q /= kf;

    let denom = p - 2.0 * q;
    if !(denom > 0.0) {
        return Err(Error::Fit(format!(
            "degenerate probability-weighted moments: P = {p}, Q = {q}"
        )));
    }
    let gamma = (p - 4.0 * q) / denom;
    let g_s = 2.0 * p * q / denom;
    let theta = ParamTheta::new(k, m, gamma, s, g_s).map_err(|e| Error::Fit(e.to_string()))?;

    let mut warnings = Vec::new();
    let at_threshold = sample.values.iter().filter(|&&y| y == s).count();
    if at_threshold > 1 {
        warnings.push(FitWarning::TiedThreshold);
    }
    Ok(FitReport {
        theta,
        exceedances_used: k,
        warnings,
    })
}

/// Threshold selection at quantile `q` followed by the PWM fit.
pub fn fit_tail(sample: &SortedSample, q: f64) -> Result<FitReport> {
    let (s, k) = select_threshold(sample, q)?;
    pwme_fit(sample, s, k)
}
