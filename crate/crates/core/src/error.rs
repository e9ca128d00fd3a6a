use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// One or more parameter or configuration fields are out of range.
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),

    #[error("time step {dt} violates the stiffness guard (dt * rate = {product:.3} > 0.1)")]
    StiffnessGuard { dt: f64, product: f64 },

    #[error("norm drift {drift:.3e} exceeds tolerance at t = {time}")]
    NormDrift { drift: f64, time: f64 },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("system is not superradiant: |alpha|^2 = {photons:.3e} below floor {floor:.3e}")]
    NotSuperradiant { photons: f64, floor: f64 },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("ensemble aborted: {failed} of {total} trajectories failed")]
    EnsembleAborted { failed: usize, total: usize },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(vec![msg.into()])
    }

    /// True for failures of the numerical integration itself.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NormDrift { .. } | Error::NonFinite { .. } | Error::EnsembleAborted { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
