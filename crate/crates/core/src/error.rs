use thiserror::Error;

/// Errors raised by descriptor construction, quadrature and the norm pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("family `{family}` produced a non-finite value at x = {x}")]
    Domain { family: String, x: f64 },

    #[error("integrand is not finite at t = {at}")]
    NonFiniteIntegrand { at: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("frequency {k} is beyond the Nyquist limit {nyquist} of the grid")]
    Nyquist { k: i64, nyquist: i64 },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
