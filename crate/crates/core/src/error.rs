use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution spec: {0}")]
    InvalidSpec(&'static str),
    #[error("density integrates to {total} (expected 1 within {tolerance})")]
    Normalization { total: f64, tolerance: f64 },
    #[error("negative density {value} at x = {x}")]
    NegativeDensity { x: f64, value: f64 },
    #[error("argument {value} outside the domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("support is unbounded: the domain is horizontally unbounded, no Fourier truncation attempted")]
    UnboundedSupport,
    #[error("phi' is singular at theta = {theta}")]
    Singularity { theta: f64 },
    #[error("log-kernel integrand is not integrable: {0}")]
    SingularIntegrand(&'static str),
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("curve carries unbounded flags; {0} needs a closed bounded polyline")]
    NotApplicable(&'static str),
    #[error("boundary construction failed: {0}")]
    Construction(&'static str),
    #[error("every exit sample was censored")]
    NoData,
    #[error("operation needs a density, the law does not provide one")]
    NoDensity,
}
