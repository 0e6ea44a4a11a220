use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vortices {0} and {1} are closer than the collision threshold")]
    Collision(usize, usize),
    #[error("total circulation must be nonzero")]
    ZeroTotalCirculation,
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("chart singularity: {0}")]
    ChartSingularity(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },
    #[error("no periodic return within t_max = {0}")]
    NotPeriodic(f64),
    #[error("initial point is an equilibrium of the reduced flow")]
    Equilibrium,
    #[error("trajectory is not relatively periodic: {0}")]
    NotRelativelyPeriodic(String),
    #[error("inconsistent result: {0}")]
    Inconsistency(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
