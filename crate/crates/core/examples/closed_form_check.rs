//! Closed-form estimator against direct numeric integration of the tail
//! model, across the range of shapes.

use evt_risk::estimators::rho_hat_integral_oracle;
use evt_risk::tail::{rho_hat_evt, ParamTheta};

fn main() -> evt_risk::Result<()> {
    println!("{:>7} {:>8} {:>22} {:>22} {:>9}", "gamma", "alpha", "closed form", "integral", "rel err");
    for gamma in [-1.5, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9] {
        let theta = ParamTheta::new(8, 80, gamma, 2.0, 1.0)?;
        for alpha in [0.05, 0.01, 0.001] {
            let closed = rho_hat_evt(&theta, alpha, 1.0)?;
            let direct = rho_hat_integral_oracle(&theta, alpha, 1.0)?;
            let rel = (closed - direct).abs() / closed;
            println!("{gamma:>7} {alpha:>8} {closed:>22.15e} {direct:>22.15e} {rel:>9.1e}");
        }
    }
    Ok(())
}
