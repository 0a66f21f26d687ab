use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not positive definite: pivot {pivot:e} at row {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix does not have full column rank {expected}")]
    RankDeficient { expected: usize },

    #[error("columns are not orthonormal (deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("log-gamma pole at non-positive integer {0}")]
    PoleAtNonPositiveInteger(i64),

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("H-polynomials of this form need 2m <= n (n = {n}, m = {m})")]
    DimensionsTooSmall { n: usize, m: usize },

    #[error("multi-index outside the convergence domain: {0}")]
    ConvergenceDomain(String),

    #[error("quadrature did not converge: refinements differ by {relative:e} (relative)")]
    QuadratureNotConverged { relative: f64 },

    #[error("no sampled frame passed the |P(u)| threshold {threshold:e}")]
    ThresholdNotMet { threshold: f64 },
}

impl Error {
    /// Errors that mark a Monte Carlo sample as lying on a null set; such
    /// samples are skipped and counted instead of aborting the run.
    pub fn is_degenerate_sample(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. } | Error::RankDeficient { .. }
        )
    }
}

pub(crate) fn dims(msg: impl Into<String>) -> Error {
    Error::InvalidDimensions(msg.into())
}
