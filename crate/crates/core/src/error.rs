use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: p = {p}, d = {d} (need 1 <= p <= d)")]
    InvalidDimension { p: usize, d: usize },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("quadrature depth p = {p} exceeds the supported maximum {max}; use the Monte Carlo estimator")]
    UnsupportedDepth { p: usize, max: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("objective dimension {expected} does not match point dimension {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("objective returned a non-finite value {value} at evaluation {eval}")]
    NonFinite { value: f64, eval: u64 },

    #[error("quadrature did not reach tolerance {tol:e} (last error estimate {estimate:e})")]
    NoConvergence { tol: f64, estimate: f64 },
}

pub(crate) fn check_dims(p: usize, d: usize) -> Result<()> {
    if p == 0 || d == 0 || p > d {
        Err(Error::InvalidDimension { p, d })
    } else {
        Ok(())
    }
}
