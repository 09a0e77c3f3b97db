use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use evt_risk::bench::run_experiment;
use evt_risk::distributions::DistributionSpec;
use evt_risk::estimators::{estimate_evt, rho_alpha_monte_carlo};
use evt_risk::io::{
    apply_seed_override, filter_summary_csv, load_csv, parse_config, summaries_to_csv,
    BenchmarkMetadata, OracleOutput, SEED_ENV_VAR,
};
use evt_risk::rng::RandomStream;

#[derive(Parser)]
#[command(name = "evt-risk", version, about = "Extremal upper-semideviation estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the tail model to a data set and print a JSON report.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
    },
    /// Run the benchmark grid described by a config file and write CSV summaries.
    Benchmark {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = all cores). Does not change the output.
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Monte Carlo ground truth for one benchmark distribution.
    Oracle {
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
        #[arg(long, default_value_t = 4_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print one distribution's rows from a benchmark CSV.
    PlotData {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dist: String,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Estimate { input, alpha } => {
            let data = load_csv(&input)?;
            for w in &data.parse_warnings {
                eprintln!("warning: {w}");
            }
            let report = estimate_evt(&data.values, alpha)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Benchmark { config, out, threads } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("cannot read {}", config.display()))?;
            let mut cfg = parse_config(&text)?;
            apply_seed_override(&mut cfg, std::env::var(SEED_ENV_VAR).ok().as_deref())?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
            let rows = pool.install(|| run_experiment(&cfg))?;
            std::fs::write(&out, summaries_to_csv(&rows))
                .with_context(|| format!("cannot write {}", out.display()))?;
            let mut meta_path = out.clone().into_os_string();
            meta_path.push(".meta.json");
            std::fs::write(
                &meta_path,
                serde_json::to_string_pretty(&BenchmarkMetadata::new(&cfg))?,
            )?;
            eprintln!("wrote {} rows to {}", rows.len(), out.display());
        }
        Command::Oracle { dist, alpha, samples, seed } => {
            let dist: DistributionSpec = dist.parse()?;
            let mc = rho_alpha_monte_carlo(dist, alpha, samples, &RandomStream::new(seed))?;
            let output = OracleOutput {
                dist,
                alpha,
                samples,
                seed,
                estimate: mc.estimate,
                std_error: mc.std_error,
                analytic: dist.true_rho_alpha(alpha).ok(),
            };
            println!("{}", serde_json::to_string_pretty(&output)?);
        }
        Command::PlotData { input, dist } => {
            let dist: DistributionSpec = dist.parse()?;
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("cannot read {}", input.display()))?;
            print!("{}", filter_summary_csv(&text, dist)?);
        }
    }
    Ok(())
}
