use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An argument lies outside the domain of a function (e.g. `phi_gamma`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of a tail-model formula does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// `v_alpha(Y_theta) >= mu_m` failed, so the closed form does not apply.
    #[error("closed-form assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("config error for key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
