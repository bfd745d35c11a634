use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config key `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },

    #[error("configuration too dense: could not place agent {agent} without overlap after {attempts} attempts")]
    ConfigurationTooDense { agent: usize, attempts: usize },

    #[error("numeric blowup: non-finite force on agent {agent} at t = {time:.4} s")]
    NumericBlowup { agent: usize, time: f64 },

    #[error("insufficient population: {available} agents, but kappa = {kappa}")]
    InsufficientPopulation { available: usize, kappa: usize },

    #[error("coincident agent: kappa-th neighbour sits exactly on the probe point")]
    CoincidentAgent,

    #[error("degenerate series: {0}")]
    DegenerateSeries(String),

    #[error("series too short: {len} values, need at least {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parse error at row {row}, column `{column}`: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 1 for usage/config problems, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig { .. }
            | Error::Json(_)
            | Error::OutOfRange(_)
            | Error::Parse { .. } => 1,
            _ => 2,
        }
    }
}
