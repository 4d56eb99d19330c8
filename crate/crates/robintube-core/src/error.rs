use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("singular factorization (pivot {pivot:.3e} at row {row})")]
    Singular { row: usize, pivot: f64 },

    #[error("eigensolver stalled after {iterations} iterations (worst residual {worst:.3e})")]
    NoConvergence {
        iterations: usize,
        worst: f64,
        residuals: Vec<f64>,
    },

    #[error("right-hand side violates the compatibility condition (defect {defect:.3e})")]
    Incompatible { defect: f64 },

    #[error("metric degeneracy: weight {weight:.4} at ({y0:.4}, {y1:.4})")]
    Degenerate { weight: f64, y0: f64, y1: f64 },

    #[error("arc length {s} outside [0, {length}]")]
    OutOfRange { s: f64, length: f64 },

    #[error("derivative of order {order} unavailable: {reason}")]
    DerivativeUnavailable { order: usize, reason: String },

    #[error("Frenet frame undefined: curvature vanishes near s = {s}")]
    FrameUndefined { s: f64 },

    #[error("ground state is not positive at node {node} (value {value:.3e})")]
    NotPositive { node: usize, value: f64 },

    #[error("cross-check failed: {what} differs by {gap:.3e}")]
    CrossCheck { what: String, gap: f64 },

    #[error("localization assumption violated: {0}")]
    Localization(String),

    #[error("3D eigensolver failed at eps = {eps}: {detail}; retry with a shift near lambda0/eps^2 = {suggested:.6e}")]
    Eigensolver3D { eps: f64, suggested: f64, detail: String },

    #[error("balance vector is nonzero (|rho0| = {norm:.3e}); use the localization branch")]
    NotSymmetric { norm: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
