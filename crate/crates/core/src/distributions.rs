//! The six benchmark laws: sampling, exact distribution functions and the
//! ground-truth extremal upper-semideviation.
//!
//! All laws are fixed (no free parameters): Pareto with shape 2 on `[1, inf)`,
//! Student-t with 5 degrees of freedom (unscaled), Exponential with rate 1,
//! standard Gumbel (location 0, scale 1), Uniform(0, 1) and Beta(1, 2).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::numeric::{bisect_increasing, integrate_to_infinity};
use crate::rng::RandomStream;
use crate::special::{student_t_cdf, student_t_pdf};
use crate::{Error, Result};

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;
const T_DOF: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistributionSpec {
    Pareto2,
    TStudent5,
    Exponential1,
    Gumbel,
    Uniform01,
    Beta12,
}

impl DistributionSpec {
    pub const ALL: [DistributionSpec; 6] = [
        DistributionSpec::Pareto2,
        DistributionSpec::TStudent5,
        DistributionSpec::Exponential1,
        DistributionSpec::Gumbel,
        DistributionSpec::Uniform01,
        DistributionSpec::Beta12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionSpec::Pareto2 => "pareto2",
            DistributionSpec::TStudent5 => "tstudent5",
            DistributionSpec::Exponential1 => "exponential1",
            DistributionSpec::Gumbel => "gumbel",
            DistributionSpec::Uniform01 => "uniform01",
            DistributionSpec::Beta12 => "beta12",
        }
    }

    /// Stable numeric id used in seed derivation.
    pub fn id(self) -> u64 {
        match self {
            DistributionSpec::Pareto2 => 0,
            DistributionSpec::TStudent5 => 1,
            DistributionSpec::Exponential1 => 2,
            DistributionSpec::Gumbel => 3,
            DistributionSpec::Uniform01 => 4,
            DistributionSpec::Beta12 => 5,
        }
    }

    /// Extreme value index of the law.
    pub fn gamma_ref(self) -> f64 {
        match self {
            DistributionSpec::Pareto2 => 0.5,
            DistributionSpec::TStudent5 => 0.2,
            DistributionSpec::Exponential1 | DistributionSpec::Gumbel => 0.0,
            DistributionSpec::Uniform01 => -1.0,
            DistributionSpec::Beta12 => -0.5,
        }
    }

    /// Right endpoint `z* = sup{z : F(z) < 1}`.
    pub fn right_endpoint(self) -> f64 {
        match self {
            DistributionSpec::Uniform01 | DistributionSpec::Beta12 => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Quantile map applied to a uniform on (0, 1), without the
    /// generalized-inverse correction of [`DistributionSpec::quantile`].
    fn inverse_transform(self, u: f64) -> f64 {
        match self {
            DistributionSpec::Pareto2 => (1.0 - u).powf(-0.5),
            DistributionSpec::Exponential1 => -(-u).ln_1p(),
            DistributionSpec::Gumbel => -(-u.ln()).ln(),
            DistributionSpec::Uniform01 => u,
            DistributionSpec::Beta12 => 1.0 - (1.0 - u).sqrt(),
            DistributionSpec::TStudent5 => unreachable!("t(5) has no closed-form quantile"),
        }
    }

    fn draw(self, stream: &mut RandomStream) -> f64 {
        match self {
            DistributionSpec::TStudent5 => {
                let z = stream.standard_normal();
                let v: f64 = (0..5).map(|_| stream.standard_normal().powi(2)).sum();
                z / (v / T_DOF).sqrt()
            }
            _ => self.inverse_transform(stream.open_unit()),
        }
    }

    /// `n` i.i.d. draws.
    pub fn sample_iid(self, n: usize, stream: &mut RandomStream) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidArgument("sample size must be at least 1".into()));
        }
        Ok((0..n).map(|_| self.draw(stream)).collect())
    }

    /// Fill `out` with i.i.d. draws.
    pub fn sample_into(self, out: &mut [f64], stream: &mut RandomStream) {
        for x in out {
            *x = self.draw(stream);
        }
    }

    pub fn cdf(self, z: f64) -> f64 {
        match self {
            DistributionSpec::Pareto2 => {
                if z <= 1.0 {
                    0.0
                } else {
                    1.0 - z.powi(-2)
                }
            }
            DistributionSpec::TStudent5 => student_t_cdf(z, T_DOF),
            DistributionSpec::Exponential1 => {
                if z <= 0.0 {
                    0.0
                } else {
                    -(-z).exp_m1()
                }
            }
            DistributionSpec::Gumbel => (-(-z).exp()).exp(),
            DistributionSpec::Uniform01 => z.clamp(0.0, 1.0),
            DistributionSpec::Beta12 => {
                if z <= 0.0 {
                    0.0
                } else if z >= 1.0 {
                    1.0
                } else {
                    z * (2.0 - z)
                }
            }
        }
    }

    /// Survival function `1 - F(z)`, computed without cancellation where the
    /// law allows it.
    pub fn survival(self, z: f64) -> f64 {
        match self {
            DistributionSpec::Pareto2 => {
                if z <= 1.0 {
                    1.0
                } else {
                    z.powi(-2)
                }
            }
            DistributionSpec::TStudent5 => student_t_cdf(-z, T_DOF),
            DistributionSpec::Exponential1 => {
                if z <= 0.0 {
                    1.0
                } else {
                    (-z).exp()
                }
            }
            DistributionSpec::Gumbel => -(-(-z).exp()).exp_m1(),
            DistributionSpec::Uniform01 => 1.0 - z.clamp(0.0, 1.0),
            DistributionSpec::Beta12 => {
                if z <= 0.0 {
                    1.0
                } else if z >= 1.0 {
                    0.0
                } else {
                    (1.0 - z).powi(2)
                }
            }
        }
    }

    pub fn pdf(self, z: f64) -> f64 {
        match self {
            DistributionSpec::Pareto2 => {
                if z < 1.0 {
                    0.0
                } else {
                    2.0 * z.powi(-3)
                }
            }
            DistributionSpec::TStudent5 => student_t_pdf(z, T_DOF),
            DistributionSpec::Exponential1 => {
                if z < 0.0 {
                    0.0
                } else {
                    (-z).exp()
                }
            }
            DistributionSpec::Gumbel => (-z - (-z).exp()).exp(),
            DistributionSpec::Uniform01 => {
                if (0.0..=1.0).contains(&z) {
                    1.0
                } else {
                    0.0
                }
            }
            DistributionSpec::Beta12 => {
                if (0.0..=1.0).contains(&z) {
                    2.0 * (1.0 - z)
                } else {
                    0.0
                }
            }
        }
    }

    /// Generalized inverse `inf{z : F(z) >= p}` for `p` in (0, 1).
    pub fn quantile(self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "probability must lie in (0, 1), got {p}"
            )));
        }
        let mut z = match self {
            DistributionSpec::TStudent5 => {
                let cdf = |t| student_t_cdf(t, T_DOF);
                let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
                while cdf(lo) >= p {
                    lo *= 2.0;
                }
                while cdf(hi) < p {
                    hi *= 2.0;
                }
                bisect_increasing(cdf, p, lo, hi, 1e-13)?
            }
            _ => self.inverse_transform(p),
        };
        // Closed forms can land a few ulps short of the target level.
        let mut step = 0.0_f64.next_up().max(z.abs() * f64::EPSILON * 0.5);
        for _ in 0..128 {
            if self.cdf(z) >= p {
                break;
            }
            z += step;
            step *= 2.0;
        }
        Ok(z)
    }

    pub fn true_mean(self) -> f64 {
        match self {
            DistributionSpec::Pareto2 => 2.0,
            DistributionSpec::TStudent5 => 0.0,
            DistributionSpec::Exponential1 => 1.0,
            DistributionSpec::Gumbel => EULER_MASCHERONI,
            DistributionSpec::Uniform01 => 0.5,
            DistributionSpec::Beta12 => 1.0 / 3.0,
        }
    }

    /// Exact extremal upper-semideviation `E[max(Y - mu, 0); Y >= v_alpha(Y)]`.
    ///
    /// Only the region above `w = max(v_alpha, mu)` contributes. Closed forms
    /// are used for every law except Gumbel, which is integrated numerically.
    pub fn true_rho_alpha(self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        let mu = self.true_mean();
        let var = self.quantile(1.0 - alpha)?;
        let w = var.max(mu);
        let rho = match self {
            // int_w^inf (y - 2) 2 y^-3 dy
            DistributionSpec::Pareto2 => 2.0 / w - 2.0 / (w * w),
            // E[T; T > w] = (nu + w^2) / (nu - 1) f(w); mu = 0
            DistributionSpec::TStudent5 => (T_DOF + w * w) / (T_DOF - 1.0) * student_t_pdf(w, T_DOF),
            // int_w^inf (y - 1) e^-y dy
            DistributionSpec::Exponential1 => w * (-w).exp(),
            DistributionSpec::Uniform01 => 0.5 * ((1.0 - mu).powi(2) - (w - mu).powi(2)),
            // with t = 1 - w: int_0^t (2/3 - u) 2u du
            DistributionSpec::Beta12 => {
                let t = 1.0 - w;
                2.0 / 3.0 * t * t * (1.0 - t)
            }
            DistributionSpec::Gumbel => {
                integrate_to_infinity(|y| (y - mu) * self.pdf(y), w, 1e-15, 1e-12)?.value
            }
        };
        Ok(rho)
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        DistributionSpec::ALL
            .into_iter()
            .find(|d| d.name() == wanted)
            .ok_or_else(|| {
                let names: Vec<_> = DistributionSpec::ALL.iter().map(|d| d.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown distribution `{s}`; expected one of: {}",
                    names.join(", ")
                ))
            })
    }
}
