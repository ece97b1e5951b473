use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite state")]
    NonFiniteState,
    #[error("non-finite matrix entry")]
    NonFiniteMatrix,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid box: lo > hi in component {0}")]
    InvalidBox(usize),
    #[error("control intensity {0} outside [0, 1)")]
    InvalidIntensity(f64),
    #[error("target lies outside the model domain")]
    TargetOutsideDomain,
    #[error("state lies outside the model domain")]
    OutsideDomain,
    #[error("state left the model domain at step {0}")]
    LeftDomain(usize),
    #[error("state lies on the domain boundary")]
    BoundaryPoint,
    #[error("alpha must be greater than 1, got {0}")]
    InvalidAlpha(f64),
    #[error("alpha too large for domain")]
    AlphaTooLarge,
    #[error("no convergence after {iterations} iterations (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("empty sample set")]
    EmptySample,
    #[error("state is not a fixed point (residual {0:e})")]
    NotFixedPoint(f64),
    #[error("fixed point has zero norm")]
    ZeroNormFixedPoint,
    #[error("non-finite state at step {0}")]
    NonFiniteStep(usize),
    #[error("orbit diverged at step {0}")]
    Divergence(usize),
    #[error("orbit too short: need at least {needed} points, got {got}")]
    OrbitTooShort { needed: usize, got: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
