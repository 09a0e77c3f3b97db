//! Fit the tail model to simulated samples of growing size and watch the
//! shape estimate settle.
//!
//! `cargo run --release --example fit_tail -- tstudent5`

use evt_risk::distributions::DistributionSpec;
use evt_risk::fit::{fit_tail, sort_and_summarize, DEFAULT_THRESHOLD_QUANTILE};
use evt_risk::rng::RandomStream;

fn main() -> evt_risk::Result<()> {
    let dist: DistributionSpec = std::env::args().nth(1).as_deref().unwrap_or("pareto2").parse()?;
    println!("{dist}: reference shape {}", dist.gamma_ref());
    println!("{:>8} {:>6} {:>9} {:>12} {:>12}", "m", "k", "gamma", "s", "g_s");
    let mut stream = RandomStream::new(7);
    for m in [20, 50, 100, 1_000, 10_000, 100_000] {
        let data = dist.sample_iid(m, &mut stream)?;
        let fit = fit_tail(&sort_and_summarize(&data)?, DEFAULT_THRESHOLD_QUANTILE)?;
        let th = fit.theta;
        println!("{m:>8} {:>6} {:>9.4} {:>12.5} {:>12.5}", th.k, th.gamma, th.s, th.g_s);
    }
    Ok(())
}
