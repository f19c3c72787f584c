use thiserror::Error;

use crate::solver::SolverTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not boundedly invertible (contraction ratio {ratio:.3e})")]
    NotBoundedlyInvertible { ratio: f64 },

    #[error("linearization is not stable: smallest singular value {min_singular:.3e}")]
    LinearizationNotStable { min_singular: f64 },

    #[error("gradient is singular at iteration {iteration}")]
    SingularGradient { iteration: usize },

    #[error("iteration diverged at step {iteration}: {reason}")]
    Divergence { iteration: usize, reason: String, trace: Option<Box<SolverTrace>> },

    #[error("monotonicity bounds unavailable: {0}")]
    BoundsUnavailable(String),

    #[error("sampling is not stabilizable: smallest generalized eigenvalue {mu_min:.3e}")]
    SamplingNotStabilizable { mu_min: f64 },

    #[error("rank condition fails: minimal second singular value {min_singular:.3e}")]
    RankCondition { min_singular: f64 },

    #[error("locality violated: {0}")]
    LocalityViolated(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
