//! Peaks-over-threshold tail model.
//!
//! Given `theta = {k, m, gamma, s, g_s}`, the tail model `Y_theta` has
//! distribution function
//!
//! ```text
//!            | 0                                    z < s
//! F_theta(z) | 1 - (k/m) phi_gamma((z - s) / g_s)   z in I_theta
//!            | 1                                    z >= s - g_s/gamma, gamma < 0
//! ```
//!
//! with `phi_gamma(x) = (1 + gamma x)^(-1/gamma)` (or `exp(-x)` at `gamma = 0`).
//! `Y_theta` has an atom of mass `1 - k/m` at `s` and a Generalized Pareto tail
//! carrying the remaining mass. Its value-at-risk and conditional value-at-risk
//! at levels `alpha < k/m` have closed forms, and so does the estimator
//! `alpha * (CVaR_alpha(Y_theta) - mu_m)`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Below this magnitude the shape is treated as exactly zero.
pub const GAMMA_ZERO_TOL: f64 = 1e-10;

/// Fitted tail parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamTheta {
    /// Number of strict exceedances of the threshold.
    pub k: usize,
    /// Total sample size.
    pub m: usize,
    /// Extreme value index.
    pub gamma: f64,
    /// Threshold.
    pub s: f64,
    /// Scale at the threshold.
    pub g_s: f64,
}

impl ParamTheta {
    /// Parameters usable by the estimator: `2 <= k < m`, `g_s > 0`, `gamma < 1`.
    pub fn new(k: usize, m: usize, gamma: f64, s: f64, g_s: f64) -> Result<Self> {
        let theta = Self::tail_model(k, m, gamma, s, g_s)?;
        if k < 2 {
            return Err(Error::InvalidArgument(format!(
                "at least two exceedances are required, got k = {k}"
            )));
        }
        if gamma >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "extreme value index must be below 1 for an integrable tail, got {gamma}"
            )));
        }
        Ok(theta)
    }

    /// Any parameters that define a distribution function: `1 <= k < m`,
    /// `g_s > 0`, finite `gamma` and `s`.
    pub fn tail_model(k: usize, m: usize, gamma: f64, s: f64, g_s: f64) -> Result<Self> {
        if k == 0 || k >= m {
            return Err(Error::InvalidArgument(format!("need 1 <= k < m, got k = {k}, m = {m}")));
        }
        if !(g_s > 0.0 && g_s.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {g_s}")));
        }
        if !gamma.is_finite() || !s.is_finite() {
            return Err(Error::InvalidArgument("gamma and s must be finite".into()));
        }
        Ok(Self { k, m, gamma, s, g_s })
    }

    /// Tail mass `k / m`.
    pub fn tail_fraction(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    pub fn support(&self) -> SupportInterval {
        let upper = if self.gamma < 0.0 && self.gamma.abs() >= GAMMA_ZERO_TOL {
            self.s - self.g_s / self.gamma
        } else {
            f64::INFINITY
        };
        SupportInterval { lower: self.s, upper }
    }

    fn is_exponential(&self) -> bool {
        self.gamma.abs() < GAMMA_ZERO_TOL
    }

    /// `alpha < k/m` evaluated without dividing.
    fn alpha_in_tail(&self, alpha: f64) -> bool {
        alpha > 0.0 && alpha * (self.m as f64) < self.k as f64
    }
}

/// `I_theta = [lower, upper)`; `upper` is `+inf` unless `gamma < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval {
    pub lower: f64,
    pub upper: f64,
}

impl SupportInterval {
    pub fn contains(&self, z: f64) -> bool {
        z >= self.lower && z < self.upper
    }

    pub fn contains_interior(&self, z: f64) -> bool {
        z > self.lower && z < self.upper
    }
}

/// Generalized Pareto survival function `phi_gamma(z)` on `J_gamma`.
pub fn phi_gamma(gamma: f64, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain(format!("phi_gamma needs z >= 0, got {z}")));
    }
    if gamma < 0.0 && z >= -1.0 / gamma && gamma.abs() >= GAMMA_ZERO_TOL {
        return Err(Error::Domain(format!(
            "phi_gamma with gamma = {gamma} needs z < {}, got {z}",
            -1.0 / gamma
        )));
    }
    Ok(phi_unchecked(gamma, z))
}

fn phi_unchecked(gamma: f64, z: f64) -> f64 {
    if gamma.abs() < GAMMA_ZERO_TOL {
        (-z).exp()
    } else {
        (-(gamma * z).ln_1p() / gamma).exp()
    }
}

/// `F_theta(z)`.
pub fn f_theta_cdf(theta: &ParamTheta, z: f64) -> f64 {
    if z < theta.s {
        return 0.0;
    }
    let x = (z - theta.s) / theta.g_s;
    if !theta.is_exponential() && 1.0 + theta.gamma * x <= 0.0 {
        return 1.0;
    }
    1.0 - theta.tail_fraction() * phi_unchecked(theta.gamma, x)
}

/// Density of the continuous part of `Y_theta` (zero below `s`; the atom at
/// `s` is not included).
pub fn tail_density(theta: &ParamTheta, z: f64) -> f64 {
    if z < theta.s {
        return 0.0;
    }
    let x = (z - theta.s) / theta.g_s;
    let scale = theta.tail_fraction() / theta.g_s;
    if theta.is_exponential() {
        return scale * (-x).exp();
    }
    let base = 1.0 + theta.gamma * x;
    if base <= 0.0 {
        return 0.0;
    }
    scale * (-(1.0 / theta.gamma + 1.0) * base.ln()).exp()
}

/// Tail inverse at exceedance probability `p` in (0, k/m): the point where
/// `F_theta = 1 - p`.
fn tail_inverse(theta: &ParamTheta, p: f64) -> f64 {
    let log_ratio = (theta.m as f64 * p / theta.k as f64).ln();
    if theta.is_exponential() {
        theta.s - theta.g_s * log_ratio
    } else {
        theta.s + theta.g_s * (-theta.gamma * log_ratio).exp_m1() / theta.gamma
    }
}

/// Generalized inverse `inf{z : F_theta(z) >= u}` for `u` in [0, 1).
///
/// Every `u <= 1 - k/m` maps to `s`, the location of the atom.
pub fn quantile_theta(theta: &ParamTheta, u: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("u must lie in [0, 1), got {u}")));
    }
    if u <= 1.0 - theta.tail_fraction() {
        return Ok(theta.s);
    }
    Ok(tail_inverse(theta, 1.0 - u))
}

/// Value-at-risk `v_alpha(Y_theta)` for `0 < alpha < k/m`.
pub fn var_theta(theta: &ParamTheta, alpha: f64) -> Result<f64> {
    if !theta.alpha_in_tail(alpha) {
        return Err(Error::Precondition(format!(
            "alpha must lie in (0, k/m) = (0, {}), got {alpha}",
            theta.tail_fraction()
        )));
    }
    Ok(tail_inverse(theta, alpha))
}

/// Conditional value-at-risk `c_alpha(Y_theta) = (v + g_s - gamma s) / (1 - gamma)`.
pub fn cvar_theta(theta: &ParamTheta, alpha: f64) -> Result<f64> {
    if theta.gamma >= 1.0 {
        return Err(Error::Precondition(format!(
            "CVaR of the tail model is infinite for gamma >= 1, got {}",
            theta.gamma
        )));
    }
    let v = var_theta(theta, alpha)?;
    // Written as v + (g_s + gamma (v - s)) / (1 - gamma) to keep c > v visible
    // in floating point for thresholds far from zero.
    Ok(v + (theta.g_s + theta.gamma * (v - theta.s)) / (1.0 - theta.gamma))
}

/// Closed-form EVT estimate `alpha * (c_alpha(Y_theta) - mu_m)` of the
/// extremal upper-semideviation.
///
/// Fails with [`Error::AssumptionViolated`] when `v_alpha(Y_theta) < mu_m`,
/// where the closed form no longer equals the defining integral.
pub fn rho_hat_evt(theta: &ParamTheta, alpha: f64, mu_m: f64) -> Result<f64> {
    let c = cvar_theta(theta, alpha)?;
    let v = var_theta(theta, alpha)?;
    if v < mu_m {
        return Err(Error::AssumptionViolated(format!(
            "value-at-risk {v} is below the sample mean {mu_m}"
        )));
    }
    Ok(alpha * (c - mu_m))
}

/// Mean of `Y_theta`, `s + (k/m) g_s / (1 - gamma)`, finite for `gamma < 1`.
pub fn mean_theta(theta: &ParamTheta) -> Result<f64> {
    if theta.gamma >= 1.0 {
        return Err(Error::Precondition("tail model mean is infinite for gamma >= 1".into()));
    }
    Ok(theta.s + theta.tail_fraction() * theta.g_s / (1.0 - theta.gamma))
}
