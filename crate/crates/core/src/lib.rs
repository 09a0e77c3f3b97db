//! Extremal upper-semideviation estimation from small samples.
//!
//! The extremal upper-semideviation of a random cost `Y` at level `alpha` is
//!
//! ```text
//! rho_alpha(Y) = E[ max(Y - mu, 0) ; Y >= v_alpha(Y) ]
//! ```
//!
//! where `mu = E[Y]` and `v_alpha(Y)` is the `(1 - alpha)`-quantile of `Y`.
//! With fewer than a hundred samples and `alpha = 0.01` the empirical
//! estimator sees at most one point of the region it is meant to average
//! over. This crate fits a Generalized Pareto tail above the empirical
//! 0.90-quantile using probability-weighted moments, builds the tail model
//! `Y_theta`, and evaluates `alpha * (CVaR_alpha(Y_theta) - mu_m)` in closed form.
//!
//! Layout:
//!
//! - [`tail`]: the tail model `F_theta`, its VaR, CVaR and the closed-form estimator
//! - [`fit`]: threshold selection and the probability-weighted moment fit
//! - [`estimators`]: the end-to-end pipeline, the empirical estimator and numeric oracles
//! - [`distributions`]: the six benchmark laws with exact CDFs and ground truth
//! - [`bench`]: the repeated-trial benchmark grid
//! - [`io`]: CSV ingestion, config parsing and output formats used by the CLI
//!
//! ```
//! use evt_risk::estimators::estimate_evt;
//!
//! let data: Vec<f64> = (1..=40).map(|i| (i as f64).powf(1.3)).collect();
//! let report = estimate_evt(&data, 0.01).unwrap();
//! assert_eq!(report.theta.k, 4);
//! assert!(report.rho_evt.is_some());
//! ```

pub mod bench;
pub mod distributions;
mod error;
pub mod estimators;
pub mod fit;
pub mod io;
pub mod numeric;
pub mod rng;
pub mod special;
pub mod tail;

pub use error::{Error, Result};
