//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library. Domain violations are reported eagerly so
/// callers (CLI, experiment drivers) can map them to config-vs-numerical exit
/// codes without string matching.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside a documented precondition (bad exponent range, |x| > 1,
    /// m > l, mismatched lengths, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A Gram matrix came out numerically non positive definite, typically
    /// because packing points are insufficiently separated for the degree.
    #[error(
        "gram matrix not positive definite (min eigenvalue {min_eigenvalue:.3e} below floor {floor:.1e}); \
         points are insufficiently separated for this degree"
    )]
    GramNotPositiveDefinite { min_eigenvalue: f64, floor: f64 },

    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// An experiment configuration is self-inconsistent (empty degree grid,
    /// beta below threshold, too few points to fit, ...).
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
