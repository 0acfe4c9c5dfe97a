//! Error type shared across the crate.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Precondition violation (bad geometry, bad parameter range, ...).
    Domain(String),
    /// A Wegner-type operation was asked to run on a distribution without
    /// a bounded density (e.g. Bernoulli); the hypothesis of the estimate
    /// fails, so the operation refuses.
    NoDensity(String),
    /// Energy too close to the spectrum for a resolvent computation.
    NearSingular { dist: f64 },
    /// Operation not available for this matrix representation
    /// (e.g. eigenvectors of a sparse matrix beyond the dense cap).
    Capability(String),
    /// Experiment config failed validation; one message per violated constraint.
    Config(Vec<String>),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NoDensity(msg) => write!(f, "no density: {msg}"),
            Error::NearSingular { dist } => {
                write!(f, "energy within {dist:.3e} of the spectrum")
            }
            Error::Capability(msg) => write!(f, "capability error: {msg}"),
            Error::Config(violations) => {
                write!(f, "invalid config: {}", violations.join("; "))
            }
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
