//! Exact extremal semideviation of the six benchmark laws next to a
//! plug-in Monte Carlo estimate.

use evt_risk::distributions::DistributionSpec;
use evt_risk::estimators::rho_alpha_monte_carlo;
use evt_risk::rng::RandomStream;

fn main() -> evt_risk::Result<()> {
    let alpha = 0.01;
    let n = 4_000_000;
    println!("{:<13} {:>12} {:>12} {:>10} {:>7}", "dist", "analytic", "monte carlo", "std err", "z");
    for dist in DistributionSpec::ALL {
        let exact = dist.true_rho_alpha(alpha)?;
        let mc = rho_alpha_monte_carlo(dist, alpha, n, &RandomStream::new(dist.id()))?;
        let z = (mc.estimate - exact) / mc.std_error;
        println!(
            "{:<13} {exact:>12.8} {:>12.8} {:>10.2e} {z:>+7.2}",
            dist.name(),
            mc.estimate,
            mc.std_error
        );
    }
    Ok(())
}
