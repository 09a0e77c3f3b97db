//! Full pipeline on a data file: load, fit, check the closed-form
//! assumptions and print the report.
//!
//! Defaults to the bundled synthetic 20-value fixture (not real data):
//! `cargo run --example case_study -- path/to/volumes.csv 0.01`

use std::path::PathBuf;

use evt_risk::estimators::estimate_evt;
use evt_risk::io::load_csv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_overflow_m20.csv")
    });
    let alpha: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.01);

    let data = load_csv(&path)?;
    let r = estimate_evt(&data.values, alpha)?;
    let th = &r.theta;
    println!("{} values from {}", th.m, path.display());
    println!("threshold s = {}  k = {}  gamma = {:.3}  g_s = {:.4e}", th.s, th.k, th.gamma, th.g_s);
    println!("sample mean        {:.4e}", r.mu_m);
    println!("VaR of tail model  {}", r.var_theta.map_or("n/a".into(), |v| format!("{v:.4e}")));
    println!("typical estimate   {:.4e}", r.rho_typical);
    println!("tail-model estimate {}", r.rho_evt.map_or("n/a".into(), |v| format!("{v:.4e}")));
    println!("assumptions        {:?}", r.assumptions);
    for w in &r.warnings {
        println!("warning: {w:?}");
    }
    Ok(())
}
