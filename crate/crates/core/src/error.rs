use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("series did not reach remainder bound {tol:e} within order {max_order}")]
    Convergence { tol: f64, max_order: usize },

    #[error("theta = {theta} is outside the domain of the {method} construction")]
    Domain { method: &'static str, theta: f64 },

    #[error("joint nullspace has dimension {dim}, expected 1")]
    Degeneracy { dim: usize },

    #[error("truncation n_max = {n_max} too small: {needed} required")]
    Capacity { n_max: usize, needed: usize },

    #[error("restricted norm vanishes")]
    DegenerateInput,

    #[error("pairing does not converge: tail contribution {tail:e}")]
    NonConvergent { tail: f64 },

    #[error("state roles: expected {expected}, got {got}")]
    Role {
        expected: &'static str,
        got: &'static str,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("quadrature with {nodes} nodes is not exact for degree {degree}")]
    Exactness { nodes: usize, degree: usize },

    #[error("root finding did not converge for node {index} of {nodes}")]
    Numerical { index: usize, nodes: usize },

    #[error("config line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
