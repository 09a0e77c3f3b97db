//! Data ingestion, configuration parsing and output formats.
//!
//! - data sets: one value per row, first column, optional single header row,
//!   `#` comment lines ignored
//! - benchmark config: line-oriented `key = value`, `#` starts a comment
//! - single reports: JSON; series: CSV with floats at 9 significant digits

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bench::{ExperimentConfig, GroundTruthMode, SeriesSummary};
use crate::distributions::DistributionSpec;
use crate::{Error, Result};

/// Environment variable that overrides `master_seed` in the benchmark config.
pub const SEED_ENV_VAR: &str = "EVT_RISK_SEED";

pub const SUMMARY_CSV_HEADER: &str =
    "dist,m,trials,evt_valid_fraction,mean_err_typical,q25_typ,q75_typ,mean_err_evt,q25_evt,q75_evt";

#[derive(Debug, Clone, PartialEq)]
pub struct InputDataset {
    pub values: Vec<f64>,
    pub source_path: PathBuf,
    pub parse_warnings: Vec<String>,
}

/// Parse a data set from CSV text. Only the first column is read.
pub fn parse_dataset(text: &str) -> Result<(Vec<f64>, Vec<String>)> {
    let mut values = Vec::new();
    let mut warnings = Vec::new();
    let mut first_row = true;
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let token = line.split(',').next().unwrap_or("").trim().trim_matches('"');
        let is_first = std::mem::replace(&mut first_row, false);
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(Error::Parse {
                    row,
                    message: format!("value {v} is not finite"),
                })
            }
            Err(_) if is_first => warnings.push(format!("skipped header row `{line}`")),
            Err(_) => {
                return Err(Error::Parse {
                    row,
                    message: format!("`{token}` is not a number"),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(Error::Parse {
            row: text.lines().count(),
            message: "no numeric values found".into(),
        });
    }
    Ok((values, warnings))
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<InputDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let (values, parse_warnings) = parse_dataset(&text)?;
    Ok(InputDataset {
        values,
        source_path: path.to_path_buf(),
        parse_warnings,
    })
}

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_m_values(key: &str, value: &str) -> Result<Vec<usize>> {
    let bad = || config_err(key, format!("expected `lo..hi` or a comma list, got `{value}`"));
    if let Some((lo, hi)) = value.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim();
        let hi: usize = hi.strip_prefix('=').unwrap_or(hi).trim().parse().map_err(|_| bad())?;
        if hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    value
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
        .collect()
}

fn parse_ground_truth(key: &str, value: &str) -> Result<GroundTruthMode> {
    let v = value.trim().to_ascii_lowercase();
    if v == "analytic" {
        return Ok(GroundTruthMode::Analytic);
    }
    let samples = v
        .strip_prefix("monte_carlo")
        .map(|rest| rest.trim_start_matches(['(', ':', ' ']).trim_end_matches(')').trim());
    match samples.and_then(|s| s.replace('_', "").parse::<usize>().ok()) {
        Some(samples) => Ok(GroundTruthMode::MonteCarlo { samples }),
        None => Err(config_err(
            key,
            format!("expected `analytic` or `monte_carlo(<samples>)`, got `{value}`"),
        )),
    }
}

/// Parse a benchmark config. Missing keys keep their defaults.
///
/// ```text
/// distributions = pareto2, tstudent5     # or `all`
/// m_values      = 20..99                 # inclusive range or comma list
/// trials        = 2000
/// alpha         = 0.01
/// master_seed   = 7
/// ground_truth  = analytic               # or monte_carlo(4000000)
/// ```
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            row: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "distributions" => {
                config.distributions = if value.eq_ignore_ascii_case("all") {
                    DistributionSpec::ALL.to_vec()
                } else {
                    value
                        .split(',')
                        .map(|t| t.parse().map_err(|e: Error| config_err(key, e.to_string())))
                        .collect::<Result<_>>()?
                }
            }
            "m_values" => config.m_values = parse_m_values(key, value)?,
            "trials" => {
                config.trials = value
                    .replace('_', "")
                    .parse()
                    .map_err(|_| config_err(key, format!("`{value}` is not a count")))?
            }
            "alpha" => {
                config.alpha = value
                    .parse()
                    .map_err(|_| config_err(key, format!("`{value}` is not a number")))?
            }
            "master_seed" => {
                config.master_seed = value
                    .parse()
                    .map_err(|_| config_err(key, format!("`{value}` is not a 64-bit seed")))?
            }
            "ground_truth" => config.ground_truth = parse_ground_truth(key, value)?,
            other => return Err(config_err(other, "unknown key")),
        }
    }
    config.validate().map_err(|e| config_err("config", e.to_string()))?;
    Ok(config)
}

/// Replace `master_seed` when the override variable holds a valid seed.
pub fn apply_seed_override(config: &mut ExperimentConfig, value: Option<&str>) -> Result<()> {
    if let Some(v) = value {
        config.master_seed = v
            .trim()
            .parse()
            .map_err(|_| config_err(SEED_ENV_VAR, format!("`{v}` is not a 64-bit seed")))?;
    }
    Ok(())
}

/// Format like C's `%.9g`.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_field(x: Option<f64>) -> String {
    x.map(format_sig9).unwrap_or_default()
}

/// CSV for benchmark summaries. Absent EVT statistics are empty fields.
pub fn summaries_to_csv(rows: &[SeriesSummary]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.dist,
            r.m,
            r.trials_completed,
            format_sig9(r.evt_valid_fraction),
            format_sig9(r.mean_err_typical),
            format_sig9(r.q25_typical),
            format_sig9(r.q75_typical),
            opt_field(r.mean_err_evt),
            opt_field(r.q25_evt),
            opt_field(r.q75_evt),
        )
        .expect("writing to a String");
    }
    out
}

/// Keep the header and the rows of one distribution from a summary CSV.
pub fn filter_summary_csv(text: &str, dist: DistributionSpec) -> Result<String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse {
        row: 1,
        message: "empty summary file".into(),
    })?;
    if header.trim() != SUMMARY_CSV_HEADER {
        return Err(Error::Parse {
            row: 1,
            message: "not a benchmark summary file (unexpected header)".into(),
        });
    }
    let mut out = format!("{header}\n");
    for line in lines {
        if line.split(',').next() == Some(dist.name()) {
            out.push_str(line);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Sidecar metadata written next to a benchmark CSV.
#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkMetadata<'a> {
    pub config: &'a ExperimentConfig,
    pub band: &'static str,
    pub quantile_rule: &'static str,
    pub evt_statistics: &'static str,
}

impl<'a> BenchmarkMetadata<'a> {
    pub fn new(config: &'a ExperimentConfig) -> Self {
        Self {
            config,
            band: "25th to 75th percentile of per-trial errors",
            quantile_rule: "linear interpolation between order statistics, h = (n - 1) p",
            evt_statistics: "over trials where all closed-form assumptions held; see evt_valid_fraction",
        }
    }
}

/// Output of the `oracle` command.
#[derive(Debug, Clone, Serialize)]
pub struct OracleOutput {
    pub dist: DistributionSpec,
    pub alpha: f64,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub analytic: Option<f64>,
}
