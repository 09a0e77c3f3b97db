//! Small-sample benchmark of the tail-model estimator against the
//! empirical one, printed as the summary CSV.
//!
//! `cargo run --release --example benchmark_grid -- 500`  (trials per cell)

use evt_risk::bench::{run_experiment, ExperimentConfig};
use evt_risk::distributions::DistributionSpec;
use evt_risk::io::summaries_to_csv;

fn main() -> evt_risk::Result<()> {
    let trials = std::env::args().nth(1).and_then(|t| t.parse().ok()).unwrap_or(500);
    let config = ExperimentConfig {
        distributions: vec![DistributionSpec::Pareto2, DistributionSpec::TStudent5, DistributionSpec::Gumbel],
        m_values: vec![20, 40, 60, 80, 99],
        trials,
        ..ExperimentConfig::default()
    };
    let rows = run_experiment(&config)?;
    print!("{}", summaries_to_csv(&rows));
    for r in &rows {
        let evt = r.mean_err_evt.map_or("-".to_string(), |e| format!("{e:+.4}"));
        eprintln!("{:<10} m={:<3} typical {:+.4}  evt {evt}", r.dist.name(), r.m, r.mean_err_typical);
    }
    Ok(())
}
