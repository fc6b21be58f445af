use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} out of domain: {value} ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("point (t'={t_shifted}, x={x}) is not strictly inside the forward lightcone")]
    Lightcone { t_shifted: f64, x: f64 },

    #[error("log-gamma pole at z = {0}")]
    Pole(f64),

    #[error("overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("degenerate normalization: product {0:e} is not positive")]
    Degenerate(f64),

    #[error("CFL violation: Courant number {courant} exceeds {limit}")]
    Cfl { courant: f64, limit: f64 },

    #[error("initial data violates Dirichlet walls: |psi| = {value:e} at boundary (tol {tol:e})")]
    NonDirichlet { value: f64, tol: f64 },

    #[error("numerical instability at time {time}: KG norm grew by factor {growth}")]
    Instability { time: f64, growth: f64 },

    #[error("insufficient overlap: {0}")]
    InsufficientOverlap(String),

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("no reflection found: {0}")]
    NoReflection(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            expected,
        }
    }
}
